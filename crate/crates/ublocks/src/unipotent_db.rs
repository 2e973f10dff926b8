//! The curated dataset: unipotent characters with generic degrees, isolated
//! classes, e-split Levis, block rows and block-theoretic annotations, read
//! from a line-oriented text format and validated on load.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::blocks::{BlockChars, BlockRow, DefectInfo, RlgCase, SylowRow, TwinRecord, TwinRow};
use crate::centralizers::{Ambient, Congruence, IsolatedClass};
use crate::esplit::{LeviRecord, RelWeylRecord};
use crate::generic_order::{group_order, valuation, EllAdicContext, GenericOrder, OrderError};
use crate::partitions;
use crate::rational_type::{Component, RationalType};
use crate::rootdata::Family;

/// The dataset shipped with the crate.
pub const DEFAULT_DATASET: &str = include_str!("../data/ublocks.dat");

/// Prime powers at which stored degrees are checked.
pub const SAMPLE_Q: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

/// Errors from loading or querying the dataset.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DbError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: invariant violated for {record}: {msg}")]
    Invariant {
        line: usize,
        record: String,
        msg: String,
    },
    #[error("line {line}: dangling reference: {msg}")]
    Dangling { line: usize, msg: String },
    #[error("cannot read dataset {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("not covered by the dataset: {0}")]
    Uncovered(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Frobenius eigenvalue class of a unipotent character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrobClass {
    Rational,
    Theta,
    Theta2,
    I,
    MinusI,
    PlusMinusXi,
    PlusMinusTheta,
}

impl FromStr for FrobClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "rational" => FrobClass::Rational,
            "theta" => FrobClass::Theta,
            "theta2" => FrobClass::Theta2,
            "i" => FrobClass::I,
            "-i" => FrobClass::MinusI,
            "+-xi" => FrobClass::PlusMinusXi,
            "+-theta" => FrobClass::PlusMinusTheta,
            _ => return Err(format!("unknown Frobenius class `{s}`")),
        })
    }
}

impl fmt::Display for FrobClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrobClass::Rational => "rational",
            FrobClass::Theta => "theta",
            FrobClass::Theta2 => "theta2",
            FrobClass::I => "i",
            FrobClass::MinusI => "-i",
            FrobClass::PlusMinusXi => "+-xi",
            FrobClass::PlusMinusTheta => "+-theta",
        })
    }
}

/// A stored unipotent character of a simple group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentCharacter {
    /// Simple type label such as `E6`, `2E6` or `3D4`.
    pub group: String,
    pub label: String,
    pub degree: GenericOrder,
    pub frobenius_class: FrobClass,
    pub e_cuspidal_for: BTreeSet<u32>,
    pub quasi_central_for: BTreeSet<(u64, u32)>,
    pub line: usize,
}

impl UnipotentCharacter {
    /// The simple group as a rational type.
    pub fn parent(&self) -> RationalType {
        self.group
            .parse::<Ambient>()
            .map(|a| a.rational_type())
            .expect("validated on load")
    }
}

/// An explicit Ennola label correspondence between two groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnnolaLabel {
    pub group: String,
    pub label: String,
    pub dual_group: String,
    pub dual_label: String,
}

/// A unipotent e-cuspidal pair `(L, lambda)` of quasi-central defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspidalPair {
    pub levi: RationalType,
    pub character: Lambda,
    pub quasi_central_for: BTreeSet<(u64, u32)>,
}

/// The validated dataset.
#[derive(Debug, Clone, Default)]
pub struct Database {
    pub unipotents: Vec<UnipotentCharacter>,
    pub ennola_labels: Vec<EnnolaLabel>,
    pub isolated: Vec<IsolatedClass>,
    pub levis: Vec<LeviRecord>,
    pub relweyl: Vec<RelWeylRecord>,
    pub block_rows: Vec<BlockRow>,
    pub twins: Vec<TwinRecord>,
    pub twin_rows: Vec<TwinRow>,
    pub defect_info: Vec<DefectInfo>,
    pub block_chars: Vec<BlockChars>,
    pub rlg: Vec<RlgCase>,
    pub sylow: Vec<SylowRow>,
}

/// Read and validate a dataset file.
pub fn load_dataset(path: &Path) -> Result<Database, DbError> {
    let text = std::fs::read_to_string(path).map_err(|e| DbError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_dataset(&text)
}

/// The built-in dataset.
pub fn default_database() -> Result<Database, DbError> {
    parse_dataset(DEFAULT_DATASET)
}

/// Parse and validate dataset text.
pub fn parse_dataset(text: &str) -> Result<Database, DbError> {
    let mut db = Database::default();
    let mut isolated_lines: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let perr = |msg: String| DbError::Parse { line, msg };
        let args = &fields[1..];
        match fields[0] {
            "unip" => db.unipotents.push(parse_unip(args, line)?),
            "ennola" => {
                let [group, label, dual_group, dual_label] = args else {
                    return Err(perr("ennola expects 4 fields".into()));
                };
                db.ennola_labels.push(EnnolaLabel {
                    group: group.to_string(),
                    label: label.to_string(),
                    dual_group: dual_group.to_string(),
                    dual_label: dual_label.to_string(),
                });
            }
            "isolated" => {
                let [ambient, id, order, cong, rt] = args else {
                    return Err(perr("isolated expects 5 fields".into()));
                };
                let order: u32 = order
                    .parse()
                    .map_err(|_| perr(format!("bad order `{order}`")))?;
                let cong: Congruence = cong.parse().map_err(|e| perr(format!("{e}")))?;
                let rt: RationalType = rt.parse().map_err(|e| perr(format!("{e}")))?;
                ambient
                    .parse::<Ambient>()
                    .map_err(|e| perr(format!("{e}")))?;
                let key = (ambient.to_string(), id.to_string());
                isolated_lines.entry(key).or_insert(line);
                match db
                    .isolated
                    .iter_mut()
                    .find(|c| c.ambient == *ambient && c.id == *id)
                {
                    Some(c) => {
                        if c.order != order {
                            return Err(DbError::Invariant {
                                line,
                                record: format!("isolated {ambient} {id}"),
                                msg: "element order differs between forms".into(),
                            });
                        }
                        c.forms.push((cong, rt));
                    }
                    None => db.isolated.push(IsolatedClass {
                        ambient: ambient.to_string(),
                        id: id.to_string(),
                        order,
                        forms: vec![(cong, rt)],
                    }),
                }
            }
            "levi" => db
                .levis
                .push(LeviRecord::from_fields(args).map_err(perr)?.at(line)),
            "relweyl" => db
                .relweyl
                .push(RelWeylRecord::from_fields(args).map_err(perr)?),
            "blockrow" => db
                .block_rows
                .push(BlockRow::from_fields(args, line).map_err(perr)?),
            "twin" => db.twins.push(TwinRecord::from_fields(args).map_err(perr)?),
            "twinrow" => db.twin_rows.push(TwinRow::from_fields(args).map_err(perr)?),
            "defectinfo" => db
                .defect_info
                .push(DefectInfo::from_fields(args).map_err(perr)?),
            "blockchars" => db
                .block_chars
                .push(BlockChars::from_fields(args).map_err(perr)?),
            "rlg" => db.rlg.push(RlgCase::from_fields(args).map_err(perr)?),
            "sylow" => db.sylow.push(SylowRow::from_fields(args).map_err(perr)?),
            other => return Err(perr(format!("unknown record kind `{other}`"))),
        }
    }
    validate(&db)?;
    Ok(db)
}

fn parse_unip(args: &[&str], line: usize) -> Result<UnipotentCharacter, DbError> {
    let perr = |msg: String| DbError::Parse { line, msg };
    if args.len() < 4 {
        return Err(perr(
            "unip expects group, label, degree, class and flags".into(),
        ));
    }
    let group = args[0].to_string();
    group.parse::<Ambient>().map_err(|e| perr(e.to_string()))?;
    let degree: GenericOrder = args[2]
        .parse()
        .map_err(|e: OrderError| perr(e.to_string()))?;
    let frobenius_class: FrobClass = args[3].parse().map_err(perr)?;
    let mut e_cuspidal_for = BTreeSet::new();
    let mut quasi_central_for = BTreeSet::new();
    for flag in &args[4..] {
        if let Some(list) = flag.strip_prefix("cusp:") {
            for e in list.split(',').filter(|s| !s.is_empty()) {
                e_cuspidal_for.insert(e.parse().map_err(|_| perr(format!("bad e `{e}`")))?);
            }
        } else if let Some(list) = flag.strip_prefix("qc:") {
            for pair in list.split(';').filter(|s| !s.is_empty()) {
                let inner = pair
                    .strip_prefix('(')
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(|| perr(format!("bad pair `{pair}`")))?;
                let (l, e) = inner
                    .split_once(',')
                    .ok_or_else(|| perr(format!("bad pair `{pair}`")))?;
                let l: u64 = l.parse().map_err(|_| perr(format!("bad ell `{l}`")))?;
                let e: u32 = e.parse().map_err(|_| perr(format!("bad e `{e}`")))?;
                quasi_central_for.insert((l, e));
            }
        } else {
            return Err(perr(format!("unknown flag `{flag}`")));
        }
    }
    Ok(UnipotentCharacter {
        group,
        label: args[1].to_string(),
        degree,
        frobenius_class,
        e_cuspidal_for,
        quasi_central_for,
        line,
    })
}

/// True if `q` is admissible for the simple group labelled `group`: the
/// groups whose Levi theory degenerates at `q = 2` exclude it.
pub fn admissible_q(group: &str, q: u64) -> bool {
    let core = group.trim_end_matches("ad").trim_end_matches("sc");
    !(q == 2 && matches!(core, "2E6" | "E7" | "E8"))
}

fn validate(db: &Database) -> Result<(), DbError> {
    let mut seen = BTreeSet::new();
    for u in &db.unipotents {
        let record = format!("unip {} {}", u.group, u.label);
        let inv = |msg: String| DbError::Invariant {
            line: u.line,
            record: record.clone(),
            msg,
        };
        if !seen.insert((u.group.clone(), u.label.clone())) {
            return Err(inv("duplicate label".into()));
        }
        let order = group_order(&u.parent())?;
        for q in SAMPLE_Q.into_iter().filter(|&q| admissible_q(&u.group, q)) {
            let deg = u.degree.eval(&q.into());
            if !deg.is_integer() || !deg.is_positive() {
                return Err(inv(format!("degree is not a positive integer at q = {q}")));
            }
            let ratio = order.eval(&q.into()) / deg;
            if !ratio.is_integer() {
                return Err(inv(format!(
                    "degree does not divide the group order at q = {q}"
                )));
            }
        }
        if u.label == "1" && (u.degree != GenericOrder::one() || !u.e_cuspidal_for.is_empty()) {
            return Err(inv(
                "the trivial character has degree 1 and is not cuspidal".into(),
            ));
        }
        for &(l, e) in &u.quasi_central_for {
            if !u.e_cuspidal_for.contains(&e) {
                return Err(inv(format!(
                    "quasi-central for ({l},{e}) but not {e}-cuspidal"
                )));
            }
            if u.degree.multiplicity(e) != order.multiplicity(e) {
                return Err(inv(format!(
                    "Phi{e}-part of the degree differs from that of the group order"
                )));
            }
        }
    }
    for en in &db.ennola_labels {
        let a = db.expand_degrees(&en.group, &en.label);
        let b = db.expand_degrees(&en.dual_group, &en.dual_label);
        let (Some(a), Some(b)) = (a, b) else {
            return Err(DbError::Dangling {
                line: 0,
                msg: format!("ennola {} {}", en.group, en.label),
            });
        };
        let mut a: Vec<String> = a.iter().map(|d| d.ennola().to_string()).collect();
        let mut b: Vec<String> = b.iter().map(|d| d.to_string()).collect();
        a.sort();
        b.sort();
        if a != b {
            return Err(DbError::Invariant {
                line: 0,
                record: format!("ennola {} {}", en.group, en.label),
                msg: "degrees are not Ennola images of each other".into(),
            });
        }
    }
    for l in &db.levis {
        l.validate()?;
    }
    for row in &db.block_rows {
        row.validate(db)?;
    }
    Ok(())
}

impl Database {
    /// Stored character by group and label.
    pub fn unipotent(&self, group: &str, label: &str) -> Option<&UnipotentCharacter> {
        self.unipotents
            .iter()
            .find(|u| u.group == group && u.label == label)
    }

    /// Stored characters of a simple group.
    pub fn unipotents_of(&self, group: &str) -> Vec<&UnipotentCharacter> {
        self.unipotents
            .iter()
            .filter(|u| u.group == group)
            .collect()
    }

    fn expand_degrees(&self, group: &str, label: &str) -> Option<Vec<GenericOrder>> {
        expand_options(label)
            .iter()
            .map(|l| self.unipotent(group, l).map(|u| u.degree.clone()))
            .collect()
    }

    /// Ennola image of a factor label of a component labelled `group`.
    pub fn ennola_factor(&self, group: &str, label: &str) -> Option<(String, String)> {
        for en in &self.ennola_labels {
            if en.group == group && en.label == label {
                return Some((en.dual_group.clone(), en.dual_label.clone()));
            }
            if en.dual_group == group && en.dual_label == label {
                return Some((en.group.clone(), en.label.clone()));
            }
        }
        None
    }

    /// Isolated classes of an ambient type.
    pub fn isolated_classes(&self, ambient: &str) -> Result<Vec<&IsolatedClass>, DbError> {
        let out: Vec<&IsolatedClass> = self
            .isolated
            .iter()
            .filter(|c| c.ambient == ambient)
            .collect();
        if out.is_empty() {
            return Err(DbError::Uncovered(format!("isolated classes of {ambient}")));
        }
        Ok(out)
    }

    /// Degree of a factor label in one simple component.
    pub fn factor_degree(&self, comp: &Component, label: &str) -> Result<GenericOrder, DbError> {
        if label == "1" {
            return Ok(GenericOrder::one());
        }
        if let Some(n) = partitions::type_a_size(comp) {
            if let Some(p) = partitions::parse_label(label, n) {
                return Ok(partitions::component_degree(&p, comp));
            }
        }
        let group = component_group_label(comp);
        match self.unipotent(&group, label) {
            Some(u) if comp.field == 1 => Ok(u.degree.clone()),
            _ => Err(DbError::Uncovered(format!("character {label} of {comp}"))),
        }
    }
}

/// Label of the simple group of a component, e.g. `2E6` or `3D4`.
pub fn component_group_label(comp: &Component) -> String {
    if comp.twist == 1 {
        comp.cartan_type.to_string()
    } else {
        format!("{}{}", comp.twist, comp.cartan_type)
    }
}

/// Expand a compressed label into its members: `X[theta^+-1]` gives
/// `X[theta]` and `X[theta^2]`, `X[+-xi]` gives `X[xi]` and `X[-xi]`, and
/// `phi{512,11/12}` gives `phi{512,11}` and `phi{512,12}`.
pub fn expand_options(label: &str) -> Vec<String> {
    if let Some(i) = label.find("^+-1") {
        let (a, b) = (&label[..i], &label[i + 4..]);
        return [format!("{a}{b}"), format!("{a}^2{b}")]
            .iter()
            .flat_map(|s| expand_options(s))
            .collect();
    }
    if let Some(i) = label.find("+-") {
        let (a, b) = (&label[..i], &label[i + 2..]);
        return [format!("{a}{b}"), format!("{a}-{b}")]
            .iter()
            .flat_map(|s| expand_options(s))
            .collect();
    }
    if let (Some(open), Some(slash)) = (label.find('{'), label.find('/')) {
        let close = label.find('}').unwrap_or(label.len());
        if open < slash && slash < close {
            let comma = label[..slash].rfind(',').map(|c| c + 1).unwrap_or(open + 1);
            let head = &label[..comma];
            let tail = &label[close..];
            return [&label[comma..slash], &label[slash + 1..close]]
                .iter()
                .map(|mid| format!("{head}{mid}{tail}"))
                .collect();
        }
    }
    vec![label.to_string()]
}

/// The character column of a block row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lambda {
    /// Tensor factors (compressed forms allowed) with a conjugate count, e.g.
    /// `phi{21}(x)phi{21}(3x)`. `runs` records how many factors each written
    /// token stands for, so `phi{21}^3` prints back as written.
    Tensor {
        factors: Vec<String>,
        conjugates: u32,
        runs: Vec<usize>,
    },
    /// A counted set of unnamed e-cuspidal characters, e.g. `6chars`.
    Anonymous(u32),
}

impl FromStr for Lambda {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(n) = s.strip_suffix("chars") {
            return n
                .parse()
                .map(Lambda::Anonymous)
                .map_err(|_| format!("bad count in `{s}`"));
        }
        let (body, conjugates) = match s.strip_suffix("x)").and_then(|t| t.rsplit_once('(')) {
            Some((body, n)) if !n.is_empty() && n.chars().all(|c| c.is_ascii_digit()) => (
                body,
                n.parse::<u32>()
                    .map_err(|_| format!("bad count in `{s}`"))?,
            ),
            _ => (s, 1),
        };
        let mut factors = Vec::new();
        let mut runs = Vec::new();
        for f in body.split("(x)") {
            if f.is_empty() {
                return Err(format!("empty tensor factor in `{s}`"));
            }
            match f.rsplit_once('^') {
                Some((base, k)) if base.ends_with('}') && k.chars().all(|c| c.is_ascii_digit()) => {
                    let k: usize = k.parse().map_err(|_| format!("bad power in `{s}`"))?;
                    factors.extend(std::iter::repeat_n(base.to_string(), k));
                    runs.push(k);
                }
                _ => {
                    factors.push(f.to_string());
                    runs.push(1);
                }
            }
        }
        Ok(Lambda::Tensor {
            factors,
            conjugates,
            runs,
        })
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Anonymous(n) => write!(f, "{n}chars"),
            Lambda::Tensor {
                factors,
                conjugates,
                runs,
            } => {
                let mut i = 0;
                let mut parts = Vec::new();
                for &k in runs {
                    if k > 1 {
                        parts.push(format!("{}^{}", factors[i], k));
                    } else {
                        parts.push(factors[i].clone());
                    }
                    i += k;
                }
                write!(f, "{}", parts.join("(x)"))?;
                if *conjugates != 1 {
                    write!(f, "({conjugates}x)")?;
                }
                Ok(())
            }
        }
    }
}

impl Lambda {
    /// The trivial character.
    pub fn trivial() -> Self {
        Lambda::Tensor {
            factors: vec!["1".into()],
            conjugates: 1,
            runs: vec![1],
        }
    }

    /// Every individual character named, as lists of per-component labels.
    /// Conjugate copies are distinguished by a `#k` suffix on the first factor.
    pub fn members(&self) -> Vec<Vec<String>> {
        match self {
            Lambda::Anonymous(n) => (0..*n).map(|k| vec![format!("anon#{k}")]).collect(),
            Lambda::Tensor {
                factors,
                conjugates,
                ..
            } => {
                let mut acc: Vec<Vec<String>> = vec![vec![]];
                for f in factors {
                    let opts = expand_options(f);
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            opts.iter().map(move |o| {
                                let mut v = prefix.clone();
                                v.push(o.clone());
                                v
                            })
                        })
                        .collect();
                }
                if *conjugates == 1 {
                    return acc;
                }
                acc.into_iter()
                    .flat_map(|m| {
                        (0..*conjugates).map(move |k| {
                            let mut v = m.clone();
                            v[0] = format!("{}#{k}", v[0]);
                            v
                        })
                    })
                    .collect()
            }
        }
    }

    /// Number of individual characters.
    pub fn count(&self) -> usize {
        self.members().len()
    }

    /// Ennola transport: type-A and trivial factors are unchanged, the others
    /// follow the stored label correspondence of their component.
    pub fn ennola(&self, db: &Database, on: &RationalType) -> Result<Lambda, DbError> {
        match self {
            Lambda::Anonymous(n) => Ok(Lambda::Anonymous(*n)),
            Lambda::Tensor {
                factors,
                conjugates,
                runs,
            } => {
                let comps = single_components(on);
                let mut out = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    if f == "1" || f.starts_with("phi{") && !f.contains(',') {
                        out.push(f.clone());
                        continue;
                    }
                    let comp = comps.get(i).ok_or_else(|| {
                        DbError::Uncovered(format!("factor {f} has no component in {on}"))
                    })?;
                    let (_, dual) = db
                        .ennola_factor(&component_group_label(comp), f)
                        .ok_or_else(|| DbError::Uncovered(format!("Ennola image of {f}")))?;
                    out.push(dual);
                }
                Ok(Lambda::Tensor {
                    factors: out,
                    conjugates: *conjugates,
                    runs: runs.clone(),
                })
            }
        }
    }
}

/// Simple components of a rational type with powers expanded into copies.
pub fn single_components(rt: &RationalType) -> Vec<Component> {
    rt.components()
        .into_iter()
        .flat_map(|c| std::iter::repeat_n(c.single(), c.power as usize))
        .collect()
}

/// `|Z|` of the simply connected group of one component at `q`.
pub fn sc_center_order(comp: &Component, q: u64) -> u64 {
    let qk = (q as u128).pow(comp.field);
    let g = |m: u128, x: u128| num_integer::gcd(m, x) as u64;
    let n = comp.cartan_type.rank as u128;
    match (comp.cartan_type.family, comp.twist) {
        (Family::A, 1) => g(n + 1, qk - 1),
        (Family::A, _) => g(n + 1, qk + 1),
        (Family::B, _) | (Family::C, _) => g(2, qk - 1),
        (Family::D, 3) => 1,
        (Family::D, 1) if n.is_multiple_of(2) => g(2, qk - 1).pow(2),
        (Family::D, 1) => g(4, qk.pow(n as u32) - 1),
        (Family::D, _) => g(4, qk.pow(n as u32) + 1),
        (Family::E, t) if n == 6 => {
            if t == 1 {
                g(3, qk - 1)
            } else {
                g(3, qk + 1)
            }
        }
        (Family::E, _) if n == 7 => g(2, qk - 1),
        _ => 1,
    }
}

/// Degrees of the members of `lambda` as characters of `on`.
pub fn member_degrees(
    db: &Database,
    on: &RationalType,
    lambda: &Lambda,
    e: u32,
) -> Result<Vec<GenericOrder>, DbError> {
    let comps = single_components(on);
    match lambda {
        Lambda::Anonymous(_) => {
            let mut out = vec![GenericOrder::one()];
            for c in &comps {
                let n = partitions::type_a_size(c)
                    .ok_or_else(|| DbError::Uncovered(format!("anonymous characters on {c}")))?;
                let cusp = partitions::cuspidal_partitions(n, partitions::effective_e(c, e));
                out = out
                    .iter()
                    .flat_map(|d| {
                        cusp.iter()
                            .map(move |p| d * &partitions::component_degree(p, c))
                    })
                    .collect();
            }
            Ok(out)
        }
        Lambda::Tensor { .. } => {
            let mut out = Vec::new();
            for m in lambda.members() {
                let labels: Vec<String> = m
                    .iter()
                    .map(|s| s.split('#').next().unwrap_or(s).to_string())
                    .collect();
                out.push(tensor_degree(db, &comps, &labels)?);
            }
            Ok(out)
        }
    }
}

/// Degree of a tensor product of factor labels over the given components.
pub fn tensor_degree(
    db: &Database,
    comps: &[Component],
    labels: &[String],
) -> Result<GenericOrder, DbError> {
    if labels.len() == 1 && labels[0] == "1" {
        return Ok(GenericOrder::one());
    }
    if labels.len() != comps.len() {
        return Err(DbError::Uncovered(format!(
            "{} factors for {} components",
            labels.len(),
            comps.len()
        )));
    }
    let mut d = GenericOrder::one();
    for (c, l) in comps.iter().zip(labels) {
        d = &d * &db.factor_degree(c, l)?;
    }
    Ok(d)
}

/// Quasi-central `l`-defect of a character of one simple component:
/// `|chi(1)|_l |Z_sc|_l = |H|_l`.
pub fn component_central(
    comp: &Component,
    degree: &GenericOrder,
    ctx: &EllAdicContext,
) -> Result<bool, DbError> {
    let order = crate::generic_order::component_order(comp)?;
    let z = valuation(&BigUint::from(sc_center_order(comp, ctx.q)), ctx.ell);
    Ok(ctx.valuation_of(degree)? + z == ctx.valuation_of(&order)?)
}

/// Quasi-central defect of every member of `lambda` on the rational type `on`.
pub fn lambda_central(
    db: &Database,
    on: &RationalType,
    lambda: &Lambda,
    ctx: &EllAdicContext,
) -> Result<bool, DbError> {
    let comps = single_components(on);
    let members: Vec<Vec<GenericOrder>> = match lambda {
        Lambda::Anonymous(_) => {
            let mut out = vec![vec![]];
            for c in &comps {
                let n = partitions::type_a_size(c)
                    .ok_or_else(|| DbError::Uncovered(format!("anonymous characters on {c}")))?;
                let cusp = partitions::cuspidal_partitions(n, partitions::effective_e(c, ctx.e));
                out = out
                    .iter()
                    .flat_map(|v: &Vec<GenericOrder>| {
                        cusp.iter().map(move |p| {
                            let mut v = v.clone();
                            v.push(partitions::component_degree(p, c));
                            v
                        })
                    })
                    .collect();
            }
            out
        }
        Lambda::Tensor { .. } => {
            let mut out = Vec::new();
            for m in lambda.members() {
                let labels: Vec<String> = m
                    .iter()
                    .map(|s| s.split('#').next().unwrap_or(s).to_string())
                    .collect();
                if labels.len() == 1 && labels[0] == "1" {
                    out.push(vec![GenericOrder::one(); comps.len()]);
                } else if labels.len() != comps.len() {
                    return Err(DbError::Uncovered(format!("{lambda} on {on}")));
                } else {
                    out.push(
                        comps
                            .iter()
                            .zip(&labels)
                            .map(|(c, l)| db.factor_degree(c, l))
                            .collect::<Result<_, _>>()?,
                    );
                }
            }
            out
        }
    };
    for degs in members {
        for (c, d) in comps.iter().zip(&degs) {
            if !component_central(c, d, ctx)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Central `l`-defect of a stored character in its simple group.
pub fn central_ell_defect(chi: &UnipotentCharacter, ctx: &EllAdicContext) -> Result<bool, DbError> {
    let comp = chi.parent().components()[0].clone();
    component_central(&comp, &chi.degree, ctx)
}

/// Pairs of a table box whose character has quasi-central defect at `ctx`.
///
/// For a torus the only pair is `(G, 1)`.
pub fn quasi_central_pairs(
    db: &Database,
    ambient: &str,
    series: &str,
    ctx: &EllAdicContext,
) -> Result<Vec<CuspidalPair>, DbError> {
    if let Ok(rt) = ambient.parse::<RationalType>() {
        if rt.is_torus() {
            return Ok(vec![CuspidalPair {
                levi: rt,
                character: Lambda::trivial(),
                quasi_central_for: BTreeSet::from([(ctx.ell, ctx.e)]),
            }]);
        }
    }
    let rows = crate::blocks::box_rows(db, ambient, ctx.ell, ctx.e, series)?;
    let mut out = Vec::new();
    for row in rows {
        if row.lambda_is_central(db, ctx)? {
            out.push(CuspidalPair {
                levi: row.levi_type()?,
                character: row.lambda.clone(),
                quasi_central_for: BTreeSet::from([(ctx.ell, ctx.e)]),
            });
        }
    }
    Ok(out)
}

/// `v_l` of an evaluated order at `q`, as a small integer helper.
pub fn ell_valuation(order: &GenericOrder, ell: u64, q: u64) -> Result<u32, DbError> {
    Ok(valuation(&order.eval_positive_int(q)?, ell))
}

/// Evaluate `n_l` as `u64` when it fits.
pub fn small(n: &BigUint) -> Option<u64> {
    n.to_u64()
}
