//! Block parametrization by e-cuspidal pairs: table boxes with Ennola
//! generation, Jordan correspondence, the `->_t` relation, twin blocks,
//! descent to quasi-simple groups, stored Lusztig-induction decompositions,
//! Sylow 2-centres and Robinson checks.

use std::collections::BTreeSet;
use std::fmt;

use crate::centralizers::{Ambient, Congruence};
use crate::esplit::e_split_levis;
use crate::generic_order::{
    defect, e_of, ennola_index, group_order, valuation, EllAdicContext, GenericOrder,
};
use crate::partitions;
use crate::rational_type::{Component, RationalType};
use crate::unipotent_db::{
    lambda_central, single_components, tensor_degree, Database, DbError, Lambda,
};

/// One row of a block table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRow {
    pub ambient: String,
    pub ell: u64,
    pub e: u32,
    pub series: String,
    /// Block number, `None` for a continuation row.
    pub number: Option<u32>,
    /// Centralizer `C_{G*}(s)^F`.
    pub c: RationalType,
    /// The `L^F` column: a rational type, `G`, `none` or a bare derived label.
    pub levi: String,
    /// The `C_{L*}(s)^F` column: a rational type, `L*` or `C`.
    pub c_l: String,
    pub lambda: Lambda,
    pub relweyl: String,
    pub line: usize,
}

fn parse_type(s: &str) -> Result<RationalType, String> {
    s.parse::<RationalType>().map_err(|e| e.to_string())
}

impl BlockRow {
    pub(crate) fn from_fields(args: &[&str], line: usize) -> Result<Self, String> {
        let [ambient, ell, e, series, no, c, levi, c_l, lambda, relweyl] = args else {
            return Err("blockrow expects 10 fields".into());
        };
        ambient.parse::<Ambient>().map_err(|e| e.to_string())?;
        let number = match *no {
            "-" => None,
            n => Some(n.parse().map_err(|_| format!("bad block number `{n}`"))?),
        };
        let row = BlockRow {
            ambient: ambient.to_string(),
            ell: ell.parse().map_err(|_| format!("bad ell `{ell}`"))?,
            e: e.parse().map_err(|_| format!("bad e `{e}`"))?,
            series: series.to_string(),
            number,
            c: parse_type(c)?,
            levi: levi.to_string(),
            c_l: c_l.to_string(),
            lambda: lambda.parse()?,
            relweyl: relweyl.to_string(),
            line,
        };
        row.levi_type().map_err(|e| e.to_string())?;
        row.c_l_type().map_err(|e| e.to_string())?;
        if crate::esplit::coxeter_order(&row.relweyl).is_none() {
            return Err(format!("bad relative Weyl group `{}`", row.relweyl));
        }
        Ok(row)
    }

    /// The ambient simple group as a rational type.
    pub fn ambient_type(&self) -> RationalType {
        self.ambient
            .parse::<Ambient>()
            .expect("checked on parse")
            .rational_type()
    }

    /// The `L^F` column as a rational type. A bare label `X` stands for
    /// `Phi_e^{r - rank X}.X` and `none` for `Phi_e^r`.
    pub fn levi_type(&self) -> Result<RationalType, DbError> {
        let rank = self.ambient_type().rank();
        let pad = |inner: Option<RationalType>| -> Result<RationalType, DbError> {
            if self.e > 2 {
                return Err(DbError::Uncovered(format!(
                    "bare Levi label `{}` at e = {}",
                    self.levi, self.e
                )));
            }
            let comps: Vec<Component> = inner
                .map(|t| {
                    t.components()
                        .into_iter()
                        .map(|c| Component { bare: false, ..c })
                        .collect()
                })
                .unwrap_or_default();
            let ss: usize = comps
                .iter()
                .map(|c| c.cartan_type.rank * (c.field * c.power) as usize)
                .sum();
            let torus = if rank == ss {
                GenericOrder::one()
            } else {
                GenericOrder::phi(self.e, (rank - ss) as i32)
            };
            Ok(RationalType::compose(&torus, &comps))
        };
        match self.levi.as_str() {
            "G" => Ok(self.ambient_type()),
            "none" => pad(None),
            s => {
                let t: RationalType = s.parse().map_err(|e| DbError::Uncovered(format!("{e}")))?;
                if t.components().iter().any(|c| c.bare) {
                    pad(Some(t))
                } else {
                    Ok(t)
                }
            }
        }
    }

    /// The `C_{L*}(s)^F` column as a rational type.
    pub fn c_l_type(&self) -> Result<RationalType, DbError> {
        match self.c_l.as_str() {
            "L*" => self.levi_type(),
            "C" => Ok(self.c.clone()),
            s => s.parse().map_err(|e| DbError::Uncovered(format!("{e}"))),
        }
    }

    /// Quasi-central defect of every member of the row's character.
    pub fn lambda_is_central(&self, db: &Database, ctx: &EllAdicContext) -> Result<bool, DbError> {
        lambda_central(db, &self.c_l_type()?, &self.lambda, ctx)
    }

    pub(crate) fn validate(&self, db: &Database) -> Result<(), DbError> {
        let dangling = |msg: String| DbError::Dangling {
            line: self.line,
            msg,
        };
        let c_l = self.c_l_type()?;
        if let Lambda::Tensor { .. } = self.lambda {
            for m in self.lambda.members() {
                let labels: Vec<String> = m
                    .iter()
                    .map(|s| s.split('#').next().unwrap_or(s).to_string())
                    .collect();
                tensor_degree(db, &single_components(&c_l), &labels)
                    .map_err(|e| dangling(format!("{} on {c_l}: {e}", self.lambda)))?;
            }
        } else {
            crate::unipotent_db::member_degrees(db, &c_l, &self.lambda, self.e)
                .map_err(|e| dangling(format!("{} on {c_l}: {e}", self.lambda)))?;
        }
        Ok(())
    }

    /// The row under `q -> -q`, transported to `ambient` with index `e`.
    pub fn ennola(&self, db: &Database, ambient: &str, e: u32) -> Result<BlockRow, DbError> {
        let flip = |s: &str| -> String {
            match s {
                "G" | "none" | "L*" | "C" => s.to_string(),
                other => other
                    .parse::<RationalType>()
                    .map(|t| t.ennola().to_string())
                    .unwrap_or_else(|_| other.to_string()),
            }
        };
        Ok(BlockRow {
            ambient: ambient.to_string(),
            ell: self.ell,
            e,
            series: self.series.clone(),
            number: self.number,
            c: self.c.ennola(),
            levi: flip(&self.levi),
            c_l: flip(&self.c_l),
            lambda: self.lambda.ennola(db, &self.c_l_type()?)?,
            relweyl: self.relweyl.clone(),
            line: self.line,
        })
    }
}

/// Ennola dual of an ambient label such as `E6ad` to `2E6ad`.
pub fn ennola_ambient(ambient: &str) -> Option<String> {
    let amb: Ambient = ambient.parse().ok()?;
    let comp = Component {
        cartan_type: amb.cartan_type,
        twist: amb.twist,
        field: 1,
        power: 1,
        bare: false,
    };
    if !comp.ennola_flips() {
        return None;
    }
    Some(if let Some(rest) = ambient.strip_prefix('2') {
        rest.to_string()
    } else {
        format!("2{ambient}")
    })
}

/// Ennola-dual index of `e` for the prime `ell`.
pub fn ennola_e(ell: u64, e: u32) -> u32 {
    if ell == 2 {
        3 - e
    } else {
        ennola_index(e)
    }
}

fn stored_box(db: &Database, ambient: &str, ell: u64, e: u32, series: &str) -> Vec<BlockRow> {
    db.block_rows
        .iter()
        .filter(|r| r.ambient == ambient && r.ell == ell && r.e == e && r.series == series)
        .cloned()
        .collect()
}

/// The rows of one table box `(ambient, ell, e, series)`: stored, or the
/// Ennola transform of the box of the dual ambient or the dual `e`.
pub fn box_rows(
    db: &Database,
    ambient: &str,
    ell: u64,
    e: u32,
    series: &str,
) -> Result<Vec<BlockRow>, DbError> {
    let de = ennola_e(ell, e);
    let dual_ambient = ennola_ambient(ambient);
    let direct = stored_box(db, ambient, ell, e, series);
    if !direct.is_empty() {
        return Ok(direct);
    }
    if let Some(dual) = dual_ambient.as_deref() {
        let rows = stored_box(db, dual, ell, de, series);
        if !rows.is_empty() {
            return rows.iter().map(|r| r.ennola(db, ambient, e)).collect();
        }
    } else if de != e {
        let rows = stored_box(db, ambient, ell, de, series);
        if !rows.is_empty() {
            return rows.iter().map(|r| r.ennola(db, ambient, e)).collect();
        }
    }
    Err(DbError::Uncovered(format!(
        "box ({ambient}, ell = {ell}, e = {e}, {series})"
    )))
}

/// Series ids with a box, stored or generated, for `(ambient, ell, e)`.
pub fn series_ids(db: &Database, ambient: &str, ell: u64, e: u32) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let dual = ennola_ambient(ambient);
    for r in &db.block_rows {
        if r.ell != ell || out.contains(&r.series) {
            continue;
        }
        let hit = (r.ambient == ambient
            && (r.e == e || (dual.is_none() && r.e == ennola_e(ell, e))))
            || (dual.as_deref() == Some(r.ambient.as_str()) && r.e == ennola_e(ell, e));
        if hit {
            out.push(r.series.clone());
        }
    }
    out
}

/// The table box of series `series` for `(ambient, ell, q)`. The box lists
/// every rational form of the centralizer; `row_congruence` tells them apart.
pub fn blocks_in_series(
    db: &Database,
    ambient: &str,
    series: &str,
    ell: u64,
    q: u64,
) -> Result<Vec<BlockRow>, DbError> {
    let e = e_of(ell, q)?;
    box_rows(db, ambient, ell, e, series)
}

/// Congruence of the isolated-class form whose type is the row's `C`. Rows
/// of a twisted ambient also match the Ennola images of the untwisted forms.
pub fn row_congruence(db: &Database, row: &BlockRow) -> Congruence {
    let base = ennola_ambient(&row.ambient)
        .filter(|_| row.ambient.starts_with('2'))
        .unwrap_or_else(|| row.ambient.clone());
    for class in db
        .isolated
        .iter()
        .filter(|c| c.ambient == row.ambient || c.ambient == base)
    {
        for (cong, t) in &class.forms {
            if t.same_as(&row.c) || (class.ambient != row.ambient && t.ennola().same_as(&row.c)) {
                return cong.clone();
            }
        }
    }
    Congruence::any()
}

/// Prime powers `q` up to `limit` with `e_ell(q) = e` in the given class.
pub fn sample_qs(ambient: &str, ell: u64, e: u32, cong: &Congruence, count: usize) -> Vec<u64> {
    (3u64..400)
        .filter(|&q| crate::generic_order::prime_power_base(q).is_some())
        .filter(|&q| q % ell != 0 && cong.matches(q))
        .filter(|&q| e_of(ell, q).ok() == Some(e))
        .filter(|&q| crate::unipotent_db::admissible_q(ambient, q))
        .take(count)
        .collect()
}

/// Identity of a block: the box and the block number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId {
    pub ambient: String,
    pub ell: u64,
    pub e: u32,
    pub series: String,
    pub number: u32,
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}:{}",
            self.ambient, self.ell, self.e, self.series, self.number
        )
    }
}

impl std::str::FromStr for BlockId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [ambient, ell, e, series, number] = parts[..] else {
            return Err(format!("bad block id `{s}`"));
        };
        Ok(BlockId {
            ambient: ambient.to_string(),
            ell: ell.parse().map_err(|_| format!("bad block id `{s}`"))?,
            e: e.parse().map_err(|_| format!("bad block id `{s}`"))?,
            series: series.to_string(),
            number: number.parse().map_err(|_| format!("bad block id `{s}`"))?,
        })
    }
}

/// Rows of a box grouped by block: continuation rows join the block above.
pub fn group_blocks(rows: &[BlockRow]) -> Vec<(u32, Vec<BlockRow>)> {
    let mut out: Vec<(u32, Vec<BlockRow>)> = Vec::new();
    for r in rows {
        match (r.number, out.last_mut()) {
            (Some(n), _) => out.push((n, vec![r.clone()])),
            (None, Some(last)) if last.1[0].c.same_as(&r.c) => last.1.push(r.clone()),
            (None, _) => {}
        }
    }
    out
}

/// Jordan correspondence of pairs: the pair `(L, lambda)` of the box row
/// whose centralizer column and character match `(c_l, lambda_s)`.
pub fn jordan_pair_correspondence(
    db: &Database,
    ambient: &str,
    series: &str,
    ell: u64,
    e: u32,
    c_l: &RationalType,
    lambda_s: &Lambda,
) -> Result<(RationalType, Lambda), DbError> {
    if series == "1" {
        return Ok((c_l.clone(), lambda_s.clone()));
    }
    for row in box_rows(db, ambient, ell, e, series)? {
        if row.c_l_type()?.same_as(c_l) && &row.lambda == lambda_s {
            return Ok((row.levi_type()?, row.lambda));
        }
    }
    Err(DbError::Uncovered(format!(
        "pair ({c_l}, {lambda_s}) in series {series} of {ambient}"
    )))
}

/// The `->_t` relation on pairs inside the centralizer `c`.
///
/// `t = 1` is the identity. A `3D4` factor carrying `3D4[-1]` (e = 1) or
/// `phi{2,1}` (e = 2) goes to the `D4` Levi with `D4[1]` or `phi{13,02}`.
/// Otherwise the pair moves to the unique e-split Levi of `c` with the same
/// derived type.
pub fn to_t_map(
    db: &Database,
    lt: &RationalType,
    lambda_t: &str,
    c: &RationalType,
    e: u32,
    t_is_one: bool,
) -> Result<(RationalType, String), DbError> {
    if t_is_one {
        return Ok((lt.clone(), lambda_t.to_string()));
    }
    if lt.components().iter().any(|x| x.twist == 3) {
        let target = match (e, lambda_t) {
            (1, "3D4[-1]") => "D4[1]",
            (2, "phi{2,1}") => "phi{13,02}",
            _ => return Err(DbError::Uncovered(format!("({lt}, {lambda_t}) at e = {e}"))),
        };
        let d4: RationalType = "D4(q)".parse().expect("literal");
        let levi = RationalType::compose(
            &GenericOrder::phi(e, (c.rank() - 4) as i32),
            &d4.components(),
        );
        return Ok((levi, target.to_string()));
    }
    let derived = |t: &RationalType| {
        let mut v: Vec<_> = t
            .components()
            .iter()
            .map(|x| (x.cartan_type, x.twist, x.field, x.power))
            .collect();
        v.sort();
        v
    };
    let comps = c.components();
    let [factor] = comps.as_slice() else {
        return Err(DbError::Uncovered(format!("e-split Levis of {c}")));
    };
    let torus = c.torus();
    let label = crate::unipotent_db::component_group_label(factor);
    let hits: Vec<RationalType> = e_split_levis(db, &label, e)?
        .into_iter()
        .map(|l| RationalType::compose(&(&l.levi.torus() * &torus), &l.levi.components()))
        .filter(|l| derived(l) == derived(lt))
        .collect();
    match hits.as_slice() {
        [one] => Ok((one.clone(), lambda_t.to_string())),
        _ => Err(DbError::Uncovered(format!(
            "e-split Levi of {c} with derived type of {lt}"
        ))),
    }
}

/// A stored twin pair `twin <group> <a> <group> <b>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinRecord {
    pub a: (String, String),
    pub b: (String, String),
}

impl TwinRecord {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        let [ga, a, gb, b] = args else {
            return Err("twin expects two (group, label) pairs".into());
        };
        Ok(TwinRecord {
            a: (ga.to_string(), a.to_string()),
            b: (gb.to_string(), b.to_string()),
        })
    }
}

/// The twin of a `(group, label)` pair, the pair itself when it has none.
pub fn twin_of(db: &Database, pair: (&str, &str)) -> (String, String) {
    for t in &db.twins {
        if (t.a.0.as_str(), t.a.1.as_str()) == pair {
            return t.b.clone();
        }
        if (t.b.0.as_str(), t.b.1.as_str()) == pair {
            return t.a.clone();
        }
    }
    (pair.0.to_string(), pair.1.to_string())
}

/// A row of the twin table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinRow {
    pub group: String,
    pub c: String,
    pub ell_condition: String,
    pub levi: String,
    pub lambdas: String,
}

impl TwinRow {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        let [group, c, cond, levi, lambdas] = args else {
            return Err("twinrow expects 5 fields".into());
        };
        Ok(TwinRow {
            group: group.to_string(),
            c: c.to_string(),
            ell_condition: cond.to_string(),
            levi: levi.to_string(),
            lambdas: lambdas.to_string(),
        })
    }

    /// True if `ell` satisfies the exclusion condition such as `!=2,3`.
    pub fn applies_to(&self, ell: u64) -> bool {
        let excluded = self.ell_condition.trim_start_matches("!=");
        !excluded
            .split(',')
            .any(|x| x.parse::<u64>().ok() == Some(ell))
    }
}

/// A member of a twin class: a numbered table block, or a unipotent block
/// named by its e-cuspidal pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockLabel {
    Numbered(BlockId),
    Pair { levi: String, lambda: String },
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::Numbered(id) => write!(f, "{id}"),
            BlockLabel::Pair { levi, lambda } => write!(f, "({levi}, {lambda})"),
        }
    }
}

fn phi_e_multiplicity(t: &RationalType, e: u32) -> Result<i32, DbError> {
    Ok(group_order(t)?.multiplicity(e))
}

/// True if the row's character set contains the trivial character of
/// `C_L`. Anonymous slots do so when the trivial character is e-cuspidal,
/// that is when the derived part of `C_L` has no `Phi_e` factor.
fn contains_trivial(row: &BlockRow, e: u32) -> Result<bool, DbError> {
    Ok(match &row.lambda {
        Lambda::Anonymous(_) => {
            let c_l = row.c_l_type()?;
            phi_e_multiplicity(&c_l, e)? == c_l.torus().multiplicity(e)
        }
        l => *l == Lambda::trivial(),
    })
}

/// Twin closure: for `E8` at `e = 2` a pair labelled by one of the listed
/// characters cannot be told apart from its twin.
fn twin_closes(ambient: &str, e: u32) -> bool {
    ambient.starts_with("E8") && e == 2
}

/// The semisimple block of the series: the numbered row, for the form of `C`
/// selected by `q`, whose `C_L` carries a Sylow `Phi_e`-torus of `C` and
/// whose character contains the trivial one.
pub fn semisimple_block(
    db: &Database,
    ambient: &str,
    series: &str,
    ell: u64,
    q: u64,
) -> Result<BlockId, DbError> {
    let e = e_of(ell, q)?;
    let rows = form_rows(db, ambient, series, ell, q)?;
    let mut hits = Vec::new();
    for r in rows.iter().filter(|r| r.number.is_some()) {
        if contains_trivial(r, e)?
            && phi_e_multiplicity(&r.c_l_type()?, e)? == phi_e_multiplicity(&r.c, e)?
        {
            hits.push(r.number.expect("filtered"));
        }
    }
    match hits[..] {
        [n] => Ok(BlockId {
            ambient: ambient.to_string(),
            ell,
            e,
            series: series.to_string(),
            number: n,
        }),
        _ => Err(DbError::Uncovered(format!(
            "semisimple block of {series} in {ambient} at q = {q}: {hits:?}"
        ))),
    }
}

/// Rows of the box whose centralizer form is the one selected by `q`. When
/// `e` is its own Ennola dual and the box lists only the other form, the
/// rows are the Ennola transforms of the listed ones.
pub fn form_rows(
    db: &Database,
    ambient: &str,
    series: &str,
    ell: u64,
    q: u64,
) -> Result<Vec<BlockRow>, DbError> {
    let e = e_of(ell, q)?;
    let rows = blocks_in_series(db, ambient, series, ell, q)?;
    let direct: Vec<BlockRow> = rows
        .iter()
        .filter(|r| row_congruence(db, r).matches(q))
        .cloned()
        .collect();
    if !direct.is_empty() || ennola_ambient(ambient).is_some() || ennola_e(ell, e) != e {
        return Ok(direct);
    }
    let mut out = Vec::new();
    for r in &rows {
        let g = r.ennola(db, ambient, e)?;
        if row_congruence(db, &g).matches(q) {
            out.push(g);
        }
    }
    Ok(out)
}

/// `J-bar_t`: the twin class of blocks of `G` attached to the unipotent block
/// of `C(st)` labelled by `(lt, lambda_t)`.
///
/// The principal block (torus, `1`) goes to the semisimple block. Other pairs
/// follow `->_t`, then the Jordan correspondence, then twin closure for `E8`
/// at `e = 2`. The series `1` names its blocks by their pairs.
#[allow(clippy::too_many_arguments)]
pub fn jbar_t(
    db: &Database,
    ambient: &str,
    series: &str,
    ell: u64,
    q: u64,
    lt: &RationalType,
    lambda_t: &str,
    t_is_one: bool,
) -> Result<Vec<BlockLabel>, DbError> {
    let e = e_of(ell, q)?;
    let principal = lt.is_torus() && lambda_t == "1";
    if series == "1" {
        let g = ambient
            .parse::<Ambient>()
            .map_err(|_| DbError::Uncovered(format!("ambient {ambient}")))?
            .rational_type();
        if principal {
            let minimal = crate::esplit::e_split_levis(db, ambient, e)?
                .into_iter()
                .max_by_key(|l| l.levi.torus().multiplicity(e))
                .ok_or_else(|| DbError::Uncovered(format!("{e}-split Levis of {ambient}")))?;
            return Ok(vec![BlockLabel::Pair {
                levi: minimal.levi.to_string(),
                lambda: "1".into(),
            }]);
        }
        let (levi, lambda) = to_t_map(db, lt, lambda_t, &g, e, t_is_one)?;
        let mut out = BTreeSet::new();
        out.insert(BlockLabel::Pair {
            levi: levi.to_string(),
            lambda: lambda.clone(),
        });
        if twin_closes(ambient, e) {
            let group = levi
                .components()
                .first()
                .map(crate::unipotent_db::component_group_label)
                .unwrap_or_default();
            let twin = twin_of(db, (&group, &lambda));
            out.insert(BlockLabel::Pair {
                levi: levi.to_string(),
                lambda: twin.1,
            });
        }
        return Ok(out.into_iter().collect());
    }
    if principal {
        return Ok(vec![BlockLabel::Numbered(semisimple_block(
            db, ambient, series, ell, q,
        )?)]);
    }
    let rows = form_rows(db, ambient, series, ell, q)?;
    let c = rows
        .first()
        .map(|r| r.c.clone())
        .ok_or_else(|| DbError::Uncovered(format!("series {series} at q = {q}")))?;
    let (c_l, lambda) = to_t_map(db, lt, lambda_t, &c, e, t_is_one)?;
    let id = |n: u32| {
        BlockLabel::Numbered(BlockId {
            ambient: ambient.to_string(),
            ell,
            e,
            series: series.to_string(),
            number: n,
        })
    };
    let blocks = group_blocks(&rows);
    let holding = |label: &str| -> Result<Vec<u32>, DbError> {
        let mut v = Vec::new();
        for (n, block_rows) in &blocks {
            for r in block_rows {
                let members: Vec<String> = r
                    .lambda
                    .members()
                    .into_iter()
                    .flatten()
                    .map(|m| m.split('#').next().unwrap_or(&m).to_string())
                    .collect();
                if r.c_l_type()?.same_as(&c_l) && members.iter().any(|m| m == label) {
                    v.push(*n);
                }
            }
        }
        Ok(v)
    };
    let mut out: BTreeSet<BlockLabel> = holding(&lambda)?.into_iter().map(id).collect();
    if twin_closes(ambient, e) {
        let group = lt
            .components()
            .first()
            .map(crate::unipotent_db::component_group_label)
            .unwrap_or_default();
        let twin = twin_of(db, (&group, &lambda));
        out.extend(holding(&twin.1)?.into_iter().map(id));
    }
    if out.is_empty() {
        return Err(DbError::Uncovered(format!(
            "block of ({c_l}, {lambda}) in {series}"
        )));
    }
    Ok(out.into_iter().collect())
}

/// Which case of the descent from `G^F` to a quasi-simple quotient applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentCase {
    /// The block is invariant.
    A,
    /// The block is not invariant and splits into conjugates.
    B,
}

/// Number of constituents of a restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constituents {
    Exactly(u32),
    AtMost(u32),
}

/// Outcome of descending a block along a centre of order `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentReport {
    pub case: DescentCase,
    pub conjugate_block_count: u32,
    pub restriction_constituents: Constituents,
    pub height_preserving_bijection: bool,
}

/// Errors of the block layer that are not dataset errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("centre order {0} is not 1, 2 or 3")]
    BadCentre(u32),
    #[error("a non-invariant block needs ell != z, got ell = z = {0}")]
    EllIsZ(u32),
}

/// Descent along a centre of order `z`. A block is not invariant exactly when
/// the centralizer is disconnected and `ell != z`; `force_b` asks for that case.
pub fn descend_block(
    z: u32,
    connected: bool,
    ell: u64,
    force_b: bool,
) -> Result<DescentReport, BlockError> {
    if !(1..=3).contains(&z) {
        return Err(BlockError::BadCentre(z));
    }
    if force_b && ell == z as u64 {
        return Err(BlockError::EllIsZ(z));
    }
    let case_b = z > 1 && ell != z as u64 && (force_b || !connected);
    if case_b {
        return Ok(DescentReport {
            case: DescentCase::B,
            conjugate_block_count: z,
            restriction_constituents: Constituents::Exactly(z),
            height_preserving_bijection: false,
        });
    }
    let bijective = z == 1 || (connected && ell != z as u64);
    Ok(DescentReport {
        case: DescentCase::A,
        conjugate_block_count: 1,
        restriction_constituents: if bijective {
            Constituents::Exactly(1)
        } else {
            Constituents::AtMost(z)
        },
        height_preserving_bijection: bijective,
    })
}

/// A stored Lusztig-induction decomposition `R_L^G(lambda)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlgCase {
    pub case_id: String,
    pub levi: RationalType,
    pub ambient: String,
    pub lambda: String,
    pub terms: Vec<(i64, String)>,
}

impl RlgCase {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        if args.len() < 5 {
            return Err("rlg expects case, L, G, lambda and terms".into());
        }
        let mut terms = Vec::new();
        for t in &args[4..] {
            let (sign, rest) = match t.as_bytes().first() {
                Some(b'+') => (1, &t[1..]),
                Some(b'-') => (-1, &t[1..]),
                _ => return Err(format!("term `{t}` needs a sign")),
            };
            let (coeff, label) = match rest.split_once('*') {
                Some((n, l)) => (
                    n.parse::<i64>()
                        .map_err(|_| format!("bad coefficient in `{t}`"))?,
                    l,
                ),
                None => (1, rest),
            };
            terms.push((sign * coeff, label.to_string()));
        }
        Ok(RlgCase {
            case_id: args[0].to_string(),
            levi: parse_type(args[1])?,
            ambient: args[2].to_string(),
            lambda: args[3].to_string(),
            terms,
        })
    }
}

/// A signed decomposition with both norms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlgReport {
    pub case_id: String,
    pub terms: Vec<(i64, String)>,
    /// Sum of absolute coefficients.
    pub norm: i64,
    /// Sum of squared coefficients.
    pub sq_norm: i64,
}

/// The stored decomposition of `R_L^G(lambda)`.
pub fn rlg_decomposition(
    db: &Database,
    levi: &RationalType,
    lambda: &str,
) -> Result<RlgReport, DbError> {
    let case = db
        .rlg
        .iter()
        .find(|c| c.levi.same_as(levi) && c.lambda == lambda)
        .ok_or_else(|| DbError::Uncovered(format!("R_L^G for ({levi}, {lambda})")))?;
    Ok(RlgReport {
        case_id: case.case_id.clone(),
        terms: case.terms.clone(),
        norm: case.terms.iter().map(|(c, _)| c.abs()).sum(),
        sq_norm: case.terms.iter().map(|(c, _)| c * c).sum(),
    })
}

/// An order expression such as `2(q-1)_2^2`, `4` or `<=4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterExpr {
    pub raw: String,
    pub bound: bool,
    /// `(base, power)` with base `0` for `(q-1)_p`, `1` for `(q+1)_p`, else an integer.
    factors: Vec<(CenterBase, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CenterBase {
    Int(u64),
    QMinus(u64),
    QPlus(u64),
}

impl std::str::FromStr for CenterExpr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (bound, mut rest) = match s.strip_prefix("<=") {
            Some(r) => (true, r),
            None => (false, s),
        };
        let mut factors = Vec::new();
        let bad = || format!("bad order expression `{s}`");
        while !rest.is_empty() {
            let base;
            if let Some(r) = rest
                .strip_prefix("(q-1)_")
                .or_else(|| rest.strip_prefix("(q+1)_"))
            {
                let minus = rest.starts_with("(q-1)");
                let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                let p: u64 = digits.parse().map_err(|_| bad())?;
                base = if minus {
                    CenterBase::QMinus(p)
                } else {
                    CenterBase::QPlus(p)
                };
                rest = &r[digits.len()..];
            } else {
                let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
                if digits.is_empty() {
                    return Err(bad());
                }
                base = CenterBase::Int(digits.parse().map_err(|_| bad())?);
                rest = &rest[digits.len()..];
            }
            let mut power = 1;
            if let Some(r) = rest.strip_prefix('^') {
                let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                power = digits.parse().map_err(|_| bad())?;
                rest = &r[digits.len()..];
            }
            factors.push((base, power));
        }
        if factors.is_empty() {
            return Err(bad());
        }
        Ok(CenterExpr {
            raw: s.to_string(),
            bound,
            factors,
        })
    }
}

impl CenterExpr {
    /// Value at `q`.
    pub fn eval(&self, q: u64) -> u64 {
        let part = |n: u64, p: u64| p.pow(valuation(&n.into(), p));
        self.factors
            .iter()
            .map(|&(b, k)| {
                let v = match b {
                    CenterBase::Int(n) => n,
                    CenterBase::QMinus(p) => part(q - 1, p),
                    CenterBase::QPlus(p) => part(q + 1, p),
                };
                v.pow(k)
            })
            .product()
    }

    /// Image under `q -> -q`.
    pub fn ennola(&self) -> CenterExpr {
        let factors = self
            .factors
            .iter()
            .map(|&(b, k)| {
                let b = match b {
                    CenterBase::QMinus(p) => CenterBase::QPlus(p),
                    CenterBase::QPlus(p) => CenterBase::QMinus(p),
                    other => other,
                };
                (b, k)
            })
            .collect();
        let raw = self
            .raw
            .replace("(q-1)", "(q#1)")
            .replace("(q+1)", "(q-1)")
            .replace("(q#1)", "(q+1)");
        CenterExpr {
            raw,
            bound: self.bound,
            factors,
        }
    }
}

/// Whether a defect group is abelian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abelian {
    Yes,
    No,
    Unknown,
}

/// Defect-group data of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectInfo {
    pub block_id: String,
    pub shape: String,
    pub center: CenterExpr,
    pub abelian: Abelian,
    /// Group, congruence and pair labels for rows of the non-abelian table.
    pub table: Option<(String, String, String)>,
}

impl DefectInfo {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        if args.len() != 4 && args.len() != 7 {
            return Err("defectinfo expects 4 or 7 fields".into());
        }
        let abelian = match args[3] {
            "yes" => Abelian::Yes,
            "no" => Abelian::No,
            "unknown" => Abelian::Unknown,
            other => return Err(format!("bad abelian flag `{other}`")),
        };
        Ok(DefectInfo {
            block_id: args[0].to_string(),
            shape: args[1].to_string(),
            center: args[2].parse()?,
            abelian,
            table: (args.len() == 7).then(|| {
                (
                    args[4].to_string(),
                    args[5].to_string(),
                    args[6].to_string(),
                )
            }),
        })
    }
}

/// Which characters of the group a block lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharSpec {
    /// All unipotent characters.
    All,
    /// The e-cuspidal unipotent characters.
    Cuspidal,
    /// Tensor labels over the group's components.
    Labels(Vec<String>),
}

/// Characters of a block, taken in a group `group` whose order gives defects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockChars {
    pub block_id: String,
    pub group: RationalType,
    /// Keep only characters of positive defect.
    pub positive_only: bool,
    pub spec: CharSpec,
}

impl BlockChars {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        if args.len() < 4 {
            return Err("blockchars expects id, group, filter and characters".into());
        }
        let positive_only = match args[2] {
            "posdef" => true,
            "any" => false,
            other => return Err(format!("bad filter `{other}`")),
        };
        let spec = match args[3..] {
            ["all"] => CharSpec::All,
            ["cusp"] => CharSpec::Cuspidal,
            ref labels => CharSpec::Labels(labels.iter().map(|s| s.to_string()).collect()),
        };
        Ok(BlockChars {
            block_id: args[0].to_string(),
            group: parse_type(args[1])?,
            positive_only,
            spec,
        })
    }
}

/// A row of the Sylow 2-centre table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylowRow {
    pub group: String,
    pub centralizer: String,
    pub shape: String,
    pub center: CenterExpr,
}

impl SylowRow {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        let [group, c, shape, center] = args else {
            return Err("sylow expects group, centralizer, shape and order".into());
        };
        Ok(SylowRow {
            group: group.to_string(),
            centralizer: c.to_string(),
            shape: shape.to_string(),
            center: center.parse()?,
        })
    }
}

/// `|Z(P)|` for a Sylow 2-subgroup `P` of the group labelled `s` at odd `q`.
pub fn sylow2_center(db: &Database, s: &str, q: u64) -> Result<u64, DbError> {
    if q.is_multiple_of(2) {
        return Err(DbError::Order(
            crate::generic_order::OrderError::EllDividesQ { ell: 2, q },
        ));
    }
    let row = db
        .sylow
        .iter()
        .find(|r| r.group == s)
        .ok_or_else(|| DbError::Uncovered(format!("Sylow 2-centre of {s}")))?;
    Ok(row.center.eval(q))
}

/// Sylow-table label of an ambient: `E7ad` keeps its own row.
pub fn sylow_label(ambient: &str) -> String {
    if ambient == "E7ad" {
        return ambient.to_string();
    }
    ambient
        .trim_end_matches("ad")
        .trim_end_matches("sc")
        .to_string()
}

/// Outcome of a Robinson check on one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobinsonReport {
    pub block: String,
    pub min_defect: u32,
    pub center_bound: u64,
    pub bound_is_upper: bool,
    pub holds: bool,
    /// Strict inequality, reported for non-abelian defect groups.
    pub strict: Option<bool>,
}

/// Degrees of the characters a block lists.
fn listed_degrees(
    db: &Database,
    chars: &BlockChars,
    e: u32,
) -> Result<Vec<(String, GenericOrder)>, DbError> {
    let comps = single_components(&chars.group);
    match &chars.spec {
        CharSpec::Labels(labels) => labels
            .iter()
            .flat_map(|l| {
                let lam: Result<Lambda, _> = l.parse::<Lambda>();
                match lam {
                    Ok(lam) => lam
                        .members()
                        .into_iter()
                        .map(|m| {
                            let labels: Vec<String> = m
                                .iter()
                                .map(|s| s.split('#').next().unwrap_or(s).to_string())
                                .collect();
                            tensor_degree(db, &comps, &labels).map(|d| (labels.join("(x)"), d))
                        })
                        .collect::<Vec<_>>(),
                    Err(msg) => vec![Err(DbError::Uncovered(msg))],
                }
            })
            .collect(),
        CharSpec::All | CharSpec::Cuspidal => {
            let mut acc: Vec<(String, GenericOrder)> = vec![(String::new(), GenericOrder::one())];
            for c in &comps {
                let options: Vec<(String, GenericOrder)> = match partitions::type_a_size(c) {
                    Some(n) => {
                        let parts = if chars.spec == CharSpec::All {
                            partitions::partitions(n)
                        } else {
                            partitions::cuspidal_partitions(n, partitions::effective_e(c, e))
                        };
                        parts
                            .iter()
                            .map(|p| (partitions::label(p), partitions::component_degree(p, c)))
                            .collect()
                    }
                    None if chars.spec == CharSpec::All && c.field == 1 => db
                        .unipotents_of(&crate::unipotent_db::component_group_label(c))
                        .iter()
                        .map(|u| (u.label.clone(), u.degree.clone()))
                        .collect(),
                    None => return Err(DbError::Uncovered(format!("characters of {c}"))),
                };
                if options.is_empty() {
                    return Err(DbError::Uncovered(format!("characters of {c}")));
                }
                acc = acc
                    .iter()
                    .flat_map(|(l, d)| {
                        options.iter().map(move |(l2, d2)| {
                            let label = if l.is_empty() {
                                l2.clone()
                            } else {
                                format!("{l}(x){l2}")
                            };
                            (label, d * d2)
                        })
                    })
                    .collect();
            }
            Ok(acc)
        }
    }
}

/// Robinson check of a block at `(ell, q)`: compares `ell^{min defect}` with
/// the order of the centre of a defect group.
pub fn robinson_check(
    db: &Database,
    block_id: &str,
    chars: &BlockChars,
    center: &CenterExpr,
    abelian: Abelian,
    ell: u64,
    q: u64,
) -> Result<RobinsonReport, DbError> {
    let ctx = EllAdicContext::new(ell, q)?;
    let order = group_order(&chars.group)?;
    let mut min: Option<u32> = None;
    for (_, d) in listed_degrees(db, chars, ctx.e)? {
        let def = defect(&d, &order, &ctx)?;
        if chars.positive_only && def == 0 {
            continue;
        }
        min = Some(min.map_or(def, |m| m.min(def)));
    }
    let min_defect =
        min.ok_or_else(|| DbError::Uncovered(format!("characters of block {block_id}")))?;
    let center_bound = center.eval(q);
    let power = ell.pow(min_defect);
    let strict = (abelian == Abelian::No).then_some(power > center_bound);
    Ok(RobinsonReport {
        block: block_id.to_string(),
        min_defect,
        center_bound,
        bound_is_upper: center.bound,
        holds: power >= center_bound && strict != Some(false),
        strict,
    })
}

/// Character list and defect data of a block id, Ennola-transported from the
/// dual box when not stored.
pub fn block_data(
    db: &Database,
    id: &BlockId,
) -> Result<(BlockChars, CenterExpr, Abelian), DbError> {
    let key = id.to_string();
    let find = |k: &str| {
        let chars = db.block_chars.iter().find(|c| c.block_id == k);
        let info = db.defect_info.iter().find(|d| d.block_id == k);
        chars.zip(info)
    };
    if let Some((c, i)) = find(&key) {
        return Ok((c.clone(), i.center.clone(), i.abelian));
    }
    let dual_ambient = ennola_ambient(&id.ambient).unwrap_or_else(|| id.ambient.clone());
    let dual = BlockId {
        ambient: dual_ambient,
        e: ennola_e(id.ell, id.e),
        ..id.clone()
    };
    let (c, i) = find(&dual.to_string())
        .ok_or_else(|| DbError::Uncovered(format!("block data of {key}")))?;
    let spec = match &c.spec {
        CharSpec::Labels(labels) => {
            let mut out = Vec::new();
            for l in labels {
                let lam: Lambda = l.parse().map_err(DbError::Uncovered)?;
                out.push(lam.ennola(db, &c.group)?.to_string());
            }
            CharSpec::Labels(out)
        }
        other => other.clone(),
    };
    let chars = BlockChars {
        block_id: key,
        group: c.group.ennola(),
        positive_only: c.positive_only,
        spec,
    };
    Ok((chars, i.center.ennola(), i.abelian))
}

/// Robinson reports for every tabulated 2-block of an ambient at `q`: the
/// principal block, the numbered rows of its isolated boxes and its rows of
/// the non-abelian table.
pub fn robinson_sweep(
    db: &Database,
    ambient: &str,
    ell: u64,
    q: u64,
) -> Result<Vec<RobinsonReport>, DbError> {
    let ctx = EllAdicContext::new(ell, q)?;
    let mut out = Vec::new();
    let s = sylow_label(ambient);
    let principal = format!("principal:{s}");
    if let Some(chars) = db.block_chars.iter().find(|c| c.block_id == principal) {
        let row = db
            .sylow
            .iter()
            .find(|r| r.group == s)
            .ok_or_else(|| DbError::Uncovered(format!("Sylow 2-centre of {s}")))?;
        out.push(robinson_check(
            db,
            &principal,
            chars,
            &row.center,
            Abelian::Unknown,
            ell,
            q,
        )?);
    }
    for series in series_ids(db, ambient, ell, ctx.e) {
        let rows = box_rows(db, ambient, ell, ctx.e, &series)?;
        for (n, _) in group_blocks(&rows) {
            let id = BlockId {
                ambient: ambient.to_string(),
                ell,
                e: ctx.e,
                series: series.clone(),
                number: n,
            };
            let (chars, center, abelian) = block_data(db, &id)?;
            out.push(robinson_check(
                db,
                &id.to_string(),
                &chars,
                &center,
                abelian,
                ell,
                q,
            )?);
        }
    }
    let core = ambient.trim_end_matches("ad").trim_end_matches("sc");
    for info in &db.defect_info {
        let Some((g, cond, _)) = &info.table else {
            continue;
        };
        let cong: Congruence = cond
            .parse()
            .map_err(|e| DbError::Uncovered(format!("{e}")))?;
        if g == core && cong.matches(q) {
            let chars = db
                .block_chars
                .iter()
                .find(|c| c.block_id == info.block_id)
                .ok_or_else(|| DbError::Uncovered(format!("characters of {}", info.block_id)))?;
            out.push(robinson_check(
                db,
                &info.block_id,
                chars,
                &info.center,
                info.abelian,
                ell,
                q,
            )?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_expressions() {
        let c: CenterExpr = "2(q-1)_2^2".parse().unwrap();
        assert_eq!(c.eval(9), 2 * 64);
        assert_eq!(c.ennola().eval(9), 2 * 4);
        assert_eq!(c.ennola().raw, "2(q+1)_2^2");
        let b: CenterExpr = "<=4".parse().unwrap();
        assert!(b.bound);
        assert_eq!(b.eval(5), 4);
        assert!("q".parse::<CenterExpr>().is_err());
    }

    #[test]
    fn descent_cases() {
        let a = descend_block(1, true, 2, false).unwrap();
        assert_eq!(
            (a.case, a.conjugate_block_count, a.restriction_constituents),
            (DescentCase::A, 1, Constituents::Exactly(1))
        );
        let b = descend_block(3, false, 2, false).unwrap();
        assert_eq!(
            (b.case, b.conjugate_block_count, b.restriction_constituents),
            (DescentCase::B, 3, Constituents::Exactly(3))
        );
        let c = descend_block(2, true, 3, false).unwrap();
        assert_eq!(c.case, DescentCase::A);
        assert!(c.height_preserving_bijection);
        assert_eq!(descend_block(3, false, 3, true), Err(BlockError::EllIsZ(3)));
        assert_eq!(
            descend_block(3, false, 3, false)
                .unwrap()
                .restriction_constituents,
            Constituents::AtMost(3)
        );
        assert!(descend_block(4, true, 3, false).is_err());
    }

    #[test]
    fn block_ids_roundtrip() {
        let id: BlockId = "E6ad:3:2:A5A1:14".parse().unwrap();
        assert_eq!(id.number, 14);
        assert_eq!(id.to_string(), "E6ad:3:2:A5A1:14");
    }

    #[test]
    fn ennola_ambients() {
        assert_eq!(ennola_ambient("E6ad").as_deref(), Some("2E6ad"));
        assert_eq!(ennola_ambient("2E6ad").as_deref(), Some("E6ad"));
        assert_eq!(ennola_ambient("E8"), None);
        assert_eq!(ennola_e(2, 1), 2);
        assert_eq!(ennola_e(5, 4), 4);
        assert_eq!(ennola_e(3, 1), 2);
    }
}
