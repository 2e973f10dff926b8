//! Pseudo-Levi subsystems by the Borel-de Siebenthal algorithm, and isolated
//! classes with their congruence-dependent rational forms.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

pub use crate::rational_type::{subsystem_label, Component, RationalType, TypeError};
use crate::rootdata::{
    inner_product, pairing_matrix, root_closure, root_system_of, CartanType, Family, RootSystem,
};

/// Errors from centralizer queries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CentralizerError {
    #[error("no isolated classes stored for ambient `{0}`")]
    MissingAmbient(String),
    #[error("q = {q} matches no stored congruence of class {class}")]
    NoCongruence { class: String, q: u64 },
    #[error("cannot parse congruence `{0}`")]
    BadCongruence(String),
    #[error("unknown ambient label `{0}`")]
    UnknownAmbient(String),
}

/// A set of residues of `q` modulo `modulus`; modulus 1 means every `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl Congruence {
    pub fn any() -> Self {
        Congruence {
            modulus: 1,
            residues: vec![0],
        }
    }

    pub fn matches(&self, q: u64) -> bool {
        self.residues.contains(&(q % self.modulus))
    }
}

impl FromStr for Congruence {
    type Err = CentralizerError;

    /// `*`, `1mod6` or `2,3mod5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "*" {
            return Ok(Self::any());
        }
        let bad = || CentralizerError::BadCongruence(s.to_string());
        let (res, m) = s.split_once("mod").ok_or_else(bad)?;
        let modulus: u64 = m.parse().map_err(|_| bad())?;
        if modulus == 0 {
            return Err(bad());
        }
        let residues = res
            .split(',')
            .map(|r| r.parse::<u64>().ok().filter(|&r| r < modulus))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        Ok(Congruence { modulus, residues })
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 1 {
            return write!(f, "*");
        }
        let r: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "{}mod{}", r.join(","), self.modulus)
    }
}

/// An ambient label such as `E6ad`, `2E6ad`, `3D4` or `E8` split into twist and type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub twist: u8,
    pub cartan_type: CartanType,
}

impl Ambient {
    /// The simple factor of this ambient as a rational type.
    pub fn rational_type(&self) -> RationalType {
        RationalType::compose(
            &crate::generic_order::GenericOrder::one(),
            &[Component {
                cartan_type: self.cartan_type,
                twist: self.twist,
                field: 1,
                power: 1,
                bare: false,
            }],
        )
    }
}

impl FromStr for Ambient {
    type Err = CentralizerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CentralizerError::UnknownAmbient(s.to_string());
        let core = s
            .strip_suffix("ad")
            .or_else(|| s.strip_suffix("sc"))
            .unwrap_or(s);
        let (twist, rest) = match core.as_bytes().first() {
            Some(b'2') => (2, &core[1..]),
            Some(b'3') => (3, &core[1..]),
            _ => (1, core),
        };
        let cartan_type: CartanType = rest.parse().map_err(|_| bad())?;
        if !crate::rootdata::twist_orders(cartan_type).contains(&twist) {
            return Err(bad());
        }
        Ok(Ambient { twist, cartan_type })
    }
}

/// A rational class of isolated elements with its congruence-dependent forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedClass {
    pub ambient: String,
    pub id: String,
    pub order: u32,
    pub forms: Vec<(Congruence, RationalType)>,
}

impl IsolatedClass {
    /// Geometric semisimple type shared by all forms.
    pub fn semisimple_label(&self) -> String {
        self.forms
            .first()
            .map(|(_, t)| t.semisimple_label())
            .unwrap_or_else(|| "none".into())
    }
}

/// The unique stored form of `class` whose congruence matches `q`.
pub fn rational_form(class: &IsolatedClass, q: u64) -> Result<&RationalType, CentralizerError> {
    let mut hits = class.forms.iter().filter(|(c, _)| c.matches(q));
    match (hits.next(), hits.next()) {
        (Some((_, t)), None) => Ok(t),
        _ => Err(CentralizerError::NoCongruence {
            class: class.id.clone(),
            q,
        }),
    }
}

/// Connected components of a list of roots under nonzero pairing.
fn components(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..n {
                if !seen[b] && cartan[a][b] != 0 {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Classify a connected Cartan matrix of finite type.
pub fn classify_connected(cartan: &[Vec<i64>]) -> Option<CartanType> {
    let n = cartan.len();
    let bond = |i: usize, j: usize| {
        if i == j {
            0
        } else {
            cartan[i][j] * cartan[j][i]
        }
    };
    let degree = |i: usize| (0..n).filter(|&j| bond(i, j) != 0).count();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| bond(i, j) != 0)
        .collect();
    if edges.len() + 1 != n {
        return None;
    }
    let make = |f: Family, r: usize| CartanType::new(f, r).ok();
    if n == 1 {
        return make(Family::A, 1);
    }
    if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| bond(i, j) > 1) {
        return match bond(i, j) {
            3 => make(Family::G, 2),
            2 if n == 2 => make(Family::B, 2),
            2 => {
                let (end, other) = if degree(i) == 1 {
                    (i, j)
                } else if degree(j) == 1 {
                    (j, i)
                } else {
                    return make(Family::F, 4);
                };
                if cartan[end][other] == -2 {
                    make(Family::C, n)
                } else {
                    make(Family::B, n)
                }
            }
            _ => None,
        };
    }
    let branch: Vec<usize> = (0..n).filter(|&i| degree(i) == 3).collect();
    match branch.as_slice() {
        [] => make(Family::A, n),
        [b] => {
            let mut arms: Vec<usize> = (0..n)
                .filter(|&j| bond(*b, j) != 0)
                .map(|start| {
                    let (mut prev, mut cur, mut len) = (*b, start, 1);
                    loop {
                        let next = (0..n).find(|&k| k != prev && bond(cur, k) != 0);
                        match next {
                            Some(k) => {
                                prev = cur;
                                cur = k;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => make(Family::D, n),
                [1, 2, 2] => make(Family::E, 6),
                [1, 2, 3] => make(Family::E, 7),
                [1, 2, 4] => make(Family::E, 8),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Product of the elementary divisors of an integer matrix of full row rank.
pub fn lattice_index(rows: &[Vec<i64>]) -> i64 {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let r = m.len();
    if r == 0 {
        return 1;
    }
    let c = m[0].len();
    let mut prod = 1i64;
    for k in 0..r {
        loop {
            let pivot = (k..r)
                .flat_map(|i| (k..c).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else { return 0 };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let p = m[k][k];
            let mut clean = true;
            for i in k + 1..r {
                let f = m[i][k] / p;
                for j in k..c {
                    m[i][j] -= f * m[k][j];
                }
                clean &= m[i][k] == 0;
            }
            for j in k + 1..c {
                let f = m[k][j] / p;
                for row in m.iter_mut().skip(k) {
                    row[j] -= f * row[k];
                }
                clean &= m[k][j] == 0;
            }
            if clean {
                let divisible = (k + 1..r).all(|i| (k + 1..c).all(|j| m[i][j] % p == 0));
                if divisible {
                    prod *= p.abs();
                    break;
                }
                let (bi, _) = (k + 1..r)
                    .flat_map(|i| (k + 1..c).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0)
                    .expect("non-divisible entry");
                for j in k..c {
                    let v = m[bi][j];
                    m[k][j] += v;
                }
            }
        }
    }
    prod
}

/// Canonical identity of a subsystem: component labels plus lattice index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsystemKey {
    pub label: String,
    pub index: i64,
}

struct Classifier<'a> {
    rs: &'a RootSystem,
    lengths: Vec<Ratio<i64>>,
    min_len: Ratio<i64>,
    highest: HashMap<Vec<Vec<i64>>, Vec<i64>>,
}

impl<'a> Classifier<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        let lengths = rs.simple_lengths();
        let min_len = lengths.iter().copied().min().expect("nonempty");
        Classifier {
            rs,
            lengths,
            min_len,
            highest: HashMap::new(),
        }
    }

    fn norm(&self, r: &[i64]) -> Ratio<i64> {
        inner_product(&self.rs.cartan_matrix, &self.lengths, r, r)
    }

    /// Components as (root indices, type, short-root flag).
    fn components(&self, roots: &[Vec<i64>]) -> Vec<(Vec<usize>, CartanType, bool)> {
        let pm = pairing_matrix(self.rs, roots);
        components(&pm)
            .into_iter()
            .map(|idx| {
                let sub: Vec<Vec<i64>> = idx
                    .iter()
                    .map(|&i| idx.iter().map(|&j| pm[i][j]).collect())
                    .collect();
                let ct = classify_connected(&sub).expect("finite-type component");
                let short = !self.rs.cartan_type.simply_laced()
                    && ct.simply_laced()
                    && idx.iter().all(|&i| self.norm(&roots[i]) == self.min_len);
                (idx, ct, short)
            })
            .collect()
    }

    fn key(&self, roots: &[Vec<i64>]) -> SubsystemKey {
        let comps = self.components(roots);
        let label = subsystem_label(comps.iter().map(|(_, t, s)| (*t, *s)).collect());
        SubsystemKey {
            label,
            index: lattice_index(roots),
        }
    }

    /// Negative highest root of the component spanned by `simples`.
    fn lowest_root(&mut self, simples: &[Vec<i64>]) -> Vec<i64> {
        let pm = pairing_matrix(self.rs, simples);
        let coeffs = self
            .highest
            .entry(pm.clone())
            .or_insert_with(|| root_closure(&pm)[0].clone())
            .clone();
        let mut out = vec![0i64; self.rs.rank()];
        for (c, r) in coeffs.iter().zip(simples) {
            for (o, x) in out.iter_mut().zip(r) {
                *o -= c * x;
            }
        }
        out
    }
}

/// Subsystems reachable from the ambient by repeatedly extending a component
/// with its negative highest root and deleting a nonempty set of nodes.
///
/// Returns canonical labels; the ambient itself is excluded.
pub fn borel_de_siebenthal(ambient: CartanType) -> BTreeSet<String> {
    borel_de_siebenthal_keys(ambient)
        .into_iter()
        .map(|k| k.label)
        .collect()
}

/// As [`borel_de_siebenthal`], keeping the lattice index in each key.
pub fn borel_de_siebenthal_keys(ambient: CartanType) -> BTreeSet<SubsystemKey> {
    let rs = root_system_of(ambient);
    let mut cl = Classifier::new(&rs);
    let n = rs.rank();
    let start: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect();
    let start_key = cl.key(&start);
    let mut seen: HashSet<SubsystemKey> = HashSet::from([start_key.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        for (idx, _, _) in cl.components(&state) {
            let simples: Vec<Vec<i64>> = idx.iter().map(|&i| state[i].clone()).collect();
            let mut ext = simples.clone();
            ext.push(cl.lowest_root(&simples));
            let rest: Vec<Vec<i64>> = (0..state.len())
                .filter(|i| !idx.contains(i))
                .map(|i| state[i].clone())
                .collect();
            let m = ext.len();
            for mask in 1u32..(1 << m) {
                let mut next = rest.clone();
                next.extend(
                    (0..m)
                        .filter(|b| mask & (1 << b) == 0)
                        .map(|b| ext[b].clone()),
                );
                let key = cl.key(&next);
                if seen.insert(key) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.remove(&start_key);
    seen.into_iter().collect()
}

/// True if `label` occurs in `closure`, also matching entries whose short-root
/// marks are dropped.
pub fn closure_contains(closure: &BTreeSet<String>, label: &str) -> bool {
    closure.contains(label) || closure.iter().any(|c| canonical_unmarked(c) == label)
}

fn canonical_unmarked(label: &str) -> String {
    let mut comps = Vec::new();
    let b = label.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let f = Family::from_letter(b[i] as char);
        let mut j = i + 1;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        let rank: usize = label[i + 1..j].parse().unwrap_or(0);
        if let Some(ct) = f.and_then(|f| CartanType::new(f, rank).ok()) {
            comps.push((ct, false));
        } else {
            return label.to_string();
        }
        if j < b.len() && b[j] == b'~' {
            j += 1;
        }
        i = j;
    }
    subsystem_label(comps)
}
