//! Emission of the block, twin, Sylow-centre and defect tables as TSV.

use crate::blocks::{box_rows, ennola_e, BlockRow};
use crate::unipotent_db::{Database, DbError};

/// Ids of the emittable tables.
pub const TABLE_IDS: &[&str] = &[
    "e6ad",
    "2e6ad",
    "e7ad",
    "e8-l5-q1",
    "e8-l5-q2",
    "e7-l3-corr",
    "e8-l3-corr",
    "e8-l2",
    "twins",
    "sylow2",
    "nonabelian",
];

/// A rectangular table of string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub id: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(id: &str, header: &[&str]) -> Self {
        Table {
            id: id.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Tab-separated rendering, header first, one line per row.
    pub fn to_tsv(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }
}

const BOX_HEADER_LE: &[&str] = &["no", "C", "(l,e)", "L", "C_L", "lambda", "W"];
const BOX_HEADER: &[&str] = &["no", "C", "L", "C_L", "lambda", "W"];

/// Render block rows; `C` and `(l,e)` appear on the first row of each run.
pub fn block_table(id: &str, rows: &[BlockRow], with_le: bool) -> Table {
    let mut t = Table::new(id, if with_le { BOX_HEADER_LE } else { BOX_HEADER });
    let mut prev: Option<&BlockRow> = None;
    for r in rows {
        let new_run = prev.is_none_or(|p| {
            p.series != r.series || p.ell != r.ell || p.e != r.e || !p.c.same_as(&r.c)
        });
        let mut cells = vec![r.number.map(|n| n.to_string()).unwrap_or_default()];
        cells.push(if new_run {
            r.c.to_string()
        } else {
            String::new()
        });
        if with_le {
            cells.push(if new_run {
                format!("({},{})", r.ell, r.e)
            } else {
                String::new()
            });
        }
        cells.extend([
            r.levi.clone(),
            r.c_l.clone(),
            r.lambda.to_string(),
            r.relweyl.clone(),
        ]);
        t.rows.push(cells);
        prev = Some(r);
    }
    t
}

fn stored(db: &Database, f: impl Fn(&BlockRow) -> bool) -> Vec<BlockRow> {
    db.block_rows.iter().filter(|r| f(r)).cloned().collect()
}

/// Ennola transform of every stored box of `from`, box by box.
fn ennola_table(db: &Database, from: &str, to: &str) -> Result<Vec<BlockRow>, DbError> {
    let mut boxes: Vec<(u64, u32, String)> = Vec::new();
    for r in db.block_rows.iter().filter(|r| r.ambient == from) {
        let key = (r.ell, r.e, r.series.clone());
        if !boxes.contains(&key) {
            boxes.push(key);
        }
    }
    let mut out = Vec::new();
    for (ell, e, series) in boxes {
        out.extend(box_rows(db, to, ell, ennola_e(ell, e), &series)?);
    }
    Ok(out)
}

/// Build the table with the given id.
pub fn emit(db: &Database, id: &str) -> Result<Table, DbError> {
    let t = match id {
        "e6ad" => block_table(id, &stored(db, |r| r.ambient == "E6ad"), true),
        "2e6ad" => block_table(id, &ennola_table(db, "E6ad", "2E6ad")?, true),
        "e7ad" => block_table(id, &stored(db, |r| r.ambient == "E7ad"), true),
        "e8-l5-q1" => block_table(
            id,
            &stored(db, |r| r.ambient == "E8" && r.ell == 5 && r.e == 1),
            false,
        ),
        "e8-l5-q2" => block_table(
            id,
            &stored(db, |r| r.ambient == "E8" && r.ell == 5 && r.e == 4),
            false,
        ),
        "e7-l3-corr" => block_table(id, &stored(db, |r| r.ambient == "E7" && r.ell == 3), false),
        "e8-l3-corr" => block_table(id, &stored(db, |r| r.ambient == "E8" && r.ell == 3), false),
        "e8-l2" => block_table(id, &stored(db, |r| r.ambient == "E8" && r.ell == 2), false),
        "twins" => {
            let mut t = Table::new(id, &["G", "C", "l", "L_t", "lambda_t,lambda_t'"]);
            for r in &db.twin_rows {
                t.rows.push(vec![
                    r.group.clone(),
                    r.c.clone(),
                    r.ell_condition.clone(),
                    r.levi.clone(),
                    r.lambdas.clone(),
                ]);
            }
            t
        }
        "sylow2" => {
            let mut t = Table::new(id, &["S", "C_G(t)", "Z(P)", "|Z(P)|"]);
            for r in &db.sylow {
                t.rows.push(vec![
                    r.group.clone(),
                    r.centralizer.clone(),
                    r.shape.clone(),
                    r.center.raw.clone(),
                ]);
            }
            t
        }
        "nonabelian" => {
            let mut t = Table::new(id, &["G", "cond", "pairs", "D", "|Z(D)|"]);
            for d in &db.defect_info {
                if let Some((g, cond, pairs)) = &d.table {
                    t.rows.push(vec![
                        g.clone(),
                        cond.clone(),
                        pairs.clone(),
                        d.shape.clone(),
                        d.center.raw.clone(),
                    ]);
                }
            }
            t
        }
        other => return Err(DbError::Uncovered(format!("table `{other}`"))),
    };
    Ok(t)
}
