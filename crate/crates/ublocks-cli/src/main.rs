//! Command-line front end: orders, centralizers, e-split Levis, block boxes,
//! Robinson sweeps, table emission and golden verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use ublocks::blocks::{blocks_in_series, robinson_sweep};
use ublocks::centralizers::{borel_de_siebenthal, closure_contains, rational_form, Ambient};
use ublocks::esplit::e_split_levis;
use ublocks::generic_order::{ell_part, group_order, is_prime, prime_power_base, GenericOrder};
use ublocks::rational_type::RationalType;
use ublocks::tables::{block_table, emit, Table, TABLE_IDS};
use ublocks::unipotent_db::{default_database, load_dataset, sc_center_order, Database, DbError};

/// Environment variable naming a dataset file to use instead of the built-in one.
const DATA_ENV: &str = "UBLOCKS_DATA";

#[derive(Parser)]
#[command(
    name = "ublocks",
    version,
    about = "Generic orders, isolated centralizers and unipotent block tables"
)]
struct Cli {
    /// Dataset file; overrides the built-in dataset and the environment variable.
    #[arg(long, global = true)]
    dataset: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generic order of a rational type, optionally evaluated at q with its ell-part.
    Order {
        type_label: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Isolated classes of an ambient type with their rational forms.
    Centralizers {
        ambient: String,
        #[arg(long)]
        q: Option<u64>,
    },
    /// The e-split Levi subgroups of an ambient type.
    Esplit {
        ambient: String,
        #[arg(long)]
        e: u32,
    },
    /// The table box of a series.
    Blocks {
        ambient: String,
        #[arg(long)]
        series: String,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        q: u64,
    },
    /// Robinson checks of the tabulated blocks.
    Robinson {
        ambient: String,
        #[arg(long)]
        ell: u64,
        /// Comma-separated prime powers.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
    /// Emit a table.
    Tables {
        #[arg(long, value_name = "ID")]
        emit: String,
    },
    /// Compare every table with the TSV files of a golden directory.
    Verify {
        #[arg(long, value_name = "DIR")]
        golden: PathBuf,
    },
}

/// Failure with its exit code.
enum Failure {
    Verification(String),
    Usage(String),
    Dataset(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Dataset(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Dataset(m) => m,
        }
    }
}

impl From<DbError> for Failure {
    fn from(e: DbError) -> Self {
        match e {
            DbError::Parse { .. } | DbError::Invariant { .. } | DbError::Dangling { .. } => {
                Failure::Dataset(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load(cli: &Cli) -> Result<Database, Failure> {
    let path = cli
        .dataset
        .clone()
        .or_else(|| std::env::var_os(DATA_ENV).map(PathBuf::from));
    let db = match path {
        Some(p) => load_dataset(&p),
        None => default_database(),
    };
    db.map_err(|e| match e {
        DbError::Io { .. } => Failure::Usage(e.to_string()),
        other => Failure::Dataset(other.to_string()),
    })
}

fn render(t: &Table, format: Format) -> String {
    match format {
        Format::Tsv => t.to_tsv(),
        Format::Json => {
            let rows: Vec<serde_json::Value> = t
                .rows
                .iter()
                .map(|r| {
                    let obj: serde_json::Map<String, serde_json::Value> = t
                        .header
                        .iter()
                        .cloned()
                        .zip(r.iter().map(|c| serde_json::Value::String(c.clone())))
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({ "table": t.id, "columns": t.header, "rows": rows });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("json of strings")
            )
        }
    }
}

fn table(id: &str, header: &[&str], rows: Vec<Vec<String>>) -> Table {
    Table {
        id: id.to_string(),
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

fn check_q(q: u64) -> Result<(), Failure> {
    if prime_power_base(q).is_none() {
        return Err(Failure::Usage(format!("q = {q} is not a prime power")));
    }
    Ok(())
}

fn check_ell(ell: u64, q: Option<u64>) -> Result<(), Failure> {
    if !is_prime(ell) {
        return Err(Failure::Usage(format!("ell = {ell} is not prime")));
    }
    if let Some(q) = q {
        if q % ell == 0 {
            return Err(Failure::Usage(format!("ell = {ell} divides q = {q}")));
        }
    }
    Ok(())
}

fn parse_ambient(s: &str) -> Result<Ambient, Failure> {
    s.parse().map_err(|e| Failure::Usage(format!("{e}")))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Order { type_label, q, ell } => cmd_order(type_label, *q, *ell, cli.format),
        Command::Centralizers { ambient, q } => {
            let db = load(cli)?;
            cmd_centralizers(&db, ambient, *q, cli.format)
        }
        Command::Esplit { ambient, e } => {
            let db = load(cli)?;
            let levis = e_split_levis(&db, ambient, *e)?;
            let rows = levis
                .iter()
                .map(|l| vec![l.levi.to_string(), l.center_e_part.to_string()])
                .collect();
            Ok(render(&table("esplit", &["L", "Z_e"], rows), cli.format))
        }
        Command::Blocks {
            ambient,
            series,
            ell,
            q,
        } => {
            check_q(*q)?;
            check_ell(*ell, Some(*q))?;
            let db = load(cli)?;
            let rows = blocks_in_series(&db, ambient, series, *ell, *q)?;
            Ok(render(&block_table("blocks", &rows, true), cli.format))
        }
        Command::Robinson { ambient, ell, q } => {
            check_ell(*ell, None)?;
            let db = load(cli)?;
            cmd_robinson(&db, ambient, *ell, q, cli.format)
        }
        Command::Tables { emit: id } => {
            let db = load(cli)?;
            if !TABLE_IDS.contains(&id.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown table `{id}`; known: {}",
                    TABLE_IDS.join(", ")
                )));
            }
            Ok(render(&emit(&db, id)?, cli.format))
        }
        Command::Verify { golden } => {
            let db = load(cli)?;
            cmd_verify(&db, golden)
        }
    }
}

fn cmd_order(
    label: &str,
    q: Option<u64>,
    ell: Option<u64>,
    format: Format,
) -> Result<String, Failure> {
    let ambient = label.parse::<Ambient>().ok();
    let rt: RationalType = match ambient {
        Some(a) => a.rational_type(),
        None => label.parse().map_err(|e| Failure::Usage(format!("{e}")))?,
    };
    let order: GenericOrder = group_order(&rt).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut rows = vec![vec!["generic".to_string(), order.to_string()]];
    if let Some(q) = q {
        check_q(q)?;
        let value: BigUint = order
            .eval_positive_int(q)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        rows.push(vec!["order".into(), value.to_string()]);
        if let Some(a) = ambient {
            let comp = a.rational_type().components()[0].clone();
            let z = sc_center_order(&comp, q);
            rows.push(vec!["center".into(), z.to_string()]);
            rows.push(vec![
                "simple order".into(),
                (&value / BigUint::from(z)).to_string(),
            ]);
        }
        if let Some(ell) = ell {
            check_ell(ell, Some(q))?;
            rows.push(vec![
                format!("{ell}-part"),
                ell_part(&value, ell).to_string(),
            ]);
        }
    } else if ell.is_some() {
        return Err(Failure::Usage("--ell needs --q".into()));
    }
    Ok(render(
        &table("order", &["quantity", "value"], rows),
        format,
    ))
}

fn cmd_centralizers(
    db: &Database,
    ambient: &str,
    q: Option<u64>,
    format: Format,
) -> Result<String, Failure> {
    let amb = parse_ambient(ambient)?;
    let closure = borel_de_siebenthal(amb.cartan_type);
    let classes = db.isolated_classes(ambient)?;
    let mut rows = Vec::new();
    for c in classes {
        let in_closure = if closure_contains(&closure, &c.semisimple_label()) {
            "yes"
        } else {
            "no"
        };
        match q {
            Some(q) => {
                check_q(q)?;
                let form = rational_form(c, q)
                    .map(|t| t.to_string())
                    .unwrap_or_else(|_| "-".into());
                rows.push(vec![
                    c.id.clone(),
                    c.order.to_string(),
                    c.semisimple_label(),
                    in_closure.into(),
                    "*".into(),
                    form,
                ]);
            }
            None => {
                for (cong, t) in &c.forms {
                    rows.push(vec![
                        c.id.clone(),
                        c.order.to_string(),
                        c.semisimple_label(),
                        in_closure.into(),
                        cong.to_string(),
                        t.to_string(),
                    ]);
                }
            }
        }
    }
    Ok(render(
        &table(
            "centralizers",
            &["id", "o(s)", "type", "in_closure", "cond", "C"],
            rows,
        ),
        format,
    ))
}

fn cmd_robinson(
    db: &Database,
    ambient: &str,
    ell: u64,
    qs: &[u64],
    format: Format,
) -> Result<String, Failure> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &q in qs {
        check_q(q)?;
        check_ell(ell, Some(q))?;
        for r in robinson_sweep(db, ambient, ell, q)? {
            if !r.holds {
                failed.push(format!("{} at q = {q}", r.block));
            }
            rows.push(vec![
                q.to_string(),
                r.block,
                r.min_defect.to_string(),
                format!(
                    "{}{}",
                    if r.bound_is_upper { "<=" } else { "" },
                    r.center_bound
                ),
                r.holds.to_string(),
                r.strict
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| "-".into()),
            ]);
        }
    }
    let out = render(
        &table(
            "robinson",
            &["q", "block", "min_defect", "|Z|", "holds", "strict"],
            rows,
        ),
        format,
    );
    if failed.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification(format!(
            "Robinson bound fails for {}",
            failed.join(", ")
        )))
    }
}

fn cmd_verify(db: &Database, dir: &Path) -> Result<String, Failure> {
    if !dir.is_dir() {
        return Err(Failure::Usage(format!(
            "golden directory {} not found",
            dir.display()
        )));
    }
    let mut report = String::new();
    let mut diffs = 0;
    for id in TABLE_IDS {
        let path = dir.join(format!("{id}.tsv"));
        let want = std::fs::read_to_string(&path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let got = emit(db, id)?.to_tsv();
        if got == want {
            report.push_str(&format!("{id}\tok\n"));
            continue;
        }
        diffs += 1;
        let (g, w): (Vec<&str>, Vec<&str>) = (got.lines().collect(), want.lines().collect());
        for i in 0..g.len().max(w.len()) {
            let (a, b) = (g.get(i).copied(), w.get(i).copied());
            if a != b {
                report.push_str(&format!(
                    "{id}\tline {}\texpected {:?}\tgot {:?}\n",
                    i + 1,
                    b.unwrap_or("<missing>"),
                    a.unwrap_or("<missing>")
                ));
            }
        }
        if g.len() == w.len() && got.ends_with('\n') != want.ends_with('\n') {
            report.push_str(&format!("{id}\ttrailing newline differs\n"));
        }
    }
    if diffs == 0 {
        Ok(report)
    } else {
        print!("{report}");
        Err(Failure::Verification(format!(
            "{diffs} table(s) differ from the golden files"
        )))
    }
}
