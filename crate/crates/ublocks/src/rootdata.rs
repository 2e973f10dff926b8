//! Root systems, Weyl degrees, extended diagrams and diagram automorphisms.
//!
//! Roots are integer vectors in simple-root coordinates. The Cartan matrix
//! follows the convention `a[i][j] = <alpha_i, alpha_j^vee>`, so the simple
//! reflection `s_j` sends `alpha` to `alpha - (sum_i c_i a[i][j]) alpha_j`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

/// Errors raised while building or factoring root data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unknown Cartan type `{0}`")]
    UnknownType(String),
    #[error("Poincare polynomial does not factor into degrees for {0}")]
    Factorization(String),
}

/// Dynkin family letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// An irreducible Cartan type such as `E8` or `B3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    /// Validated constructor; rank is capped at 8.
    pub fn new(family: Family, rank: usize) -> Result<Self, RootError> {
        let ok = match family {
            Family::A => (1..=8).contains(&rank),
            Family::B | Family::C => (2..=8).contains(&rank),
            Family::D => (4..=8).contains(&rank),
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(RootError::UnknownType(format!(
                "{}{}",
                family.letter(),
                rank
            )))
        }
    }

    /// True for the simply laced families.
    pub fn simply_laced(self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// True for types A to D.
    pub fn is_classical(self) -> bool {
        matches!(self.family, Family::A | Family::B | Family::C | Family::D)
    }

    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self.family {
            Family::A => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
            Family::B => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -2, -1);
            }
            Family::C => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -1, -2);
            }
            Family::D => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            Family::E => {
                // Bourbaki: 1-3-4-5-..., with 2 attached to 4.
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
            }
            Family::F => {
                link(0, 1, -1, -1);
                link(1, 2, -2, -1);
                link(2, 3, -1, -1);
            }
            Family::G => link(0, 1, -1, -3),
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| RootError::UnknownType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| RootError::UnknownType(s.to_string()))?;
        CartanType::new(family, rank).map_err(|_| RootError::UnknownType(s.to_string()))
    }
}

/// Apply the simple reflection `s_j` to a root given in simple-root coordinates.
pub fn reflect(cartan: &[Vec<i64>], root: &[i64], j: usize) -> Vec<i64> {
    let pairing: i64 = root.iter().zip(cartan).map(|(c, row)| c * row[j]).sum();
    let mut out = root.to_vec();
    out[j] -= pairing;
    out
}

/// Closure of the simple roots under the simple reflections of a Cartan matrix.
pub fn root_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        if seen.insert(e.clone()) {
            queue.push_back(e);
        }
    }
    while let Some(r) = queue.pop_front() {
        for j in 0..n {
            let s = reflect(cartan, &r, j);
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        hb.cmp(&ha).then_with(|| b.cmp(a))
    });
    roots
}

/// Crystallographic root system of an irreducible type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// All roots, sorted by decreasing height.
    pub roots: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.roots.iter().filter(|r| r.iter().all(|&c| c >= 0))
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots().count()
    }

    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    /// The unique root of maximal height.
    pub fn highest_root(&self) -> &[i64] {
        &self.roots[0]
    }

    /// Relative squared lengths of the simple roots, shortest normalized to 1.
    pub fn simple_lengths(&self) -> Vec<Ratio<i64>> {
        symmetrizer(&self.cartan_matrix)
    }

    /// Invariant bilinear form on root-lattice vectors.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> Ratio<i64> {
        inner_product(&self.cartan_matrix, &self.simple_lengths(), x, y)
    }
}

/// Squared lengths `l` with `a[i][j] l_j = a[j][i] l_i`, for a connected diagram.
pub fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<Ratio<i64>> {
    let n = cartan.len();
    let mut len: Vec<Option<Ratio<i64>>> = vec![None; n];
    for start in 0..n {
        if len[start].is_some() {
            continue;
        }
        len[start] = Some(Ratio::from_integer(1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && cartan[i][j] != 0 && len[j].is_none() {
                    let li = len[i].unwrap();
                    len[j] = Some(li * Ratio::new(cartan[j][i], cartan[i][j]));
                    stack.push(j);
                }
            }
        }
    }
    let mut out: Vec<Ratio<i64>> = len.into_iter().map(|l| l.unwrap()).collect();
    let min = out.iter().copied().min().unwrap_or(Ratio::from_integer(1));
    for l in out.iter_mut() {
        *l /= min;
    }
    out
}

/// `(x, y)` computed from `(alpha_i, alpha_j) = a[i][j] l_j / 2`.
pub fn inner_product(
    cartan: &[Vec<i64>],
    lengths: &[Ratio<i64>],
    x: &[i64],
    y: &[i64],
) -> Ratio<i64> {
    let mut acc = Ratio::from_integer(0);
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj == 0 {
                continue;
            }
            acc += Ratio::from_integer(xi * yj * cartan[i][j]) * lengths[j] / 2;
        }
    }
    acc
}

/// Build the root system of a type label such as `"G2"`.
pub fn build_root_system(label: &str) -> Result<RootSystem, RootError> {
    let ct: CartanType = label.parse()?;
    Ok(root_system_of(ct))
}

pub fn root_system_of(cartan_type: CartanType) -> RootSystem {
    let cartan_matrix = cartan_type.cartan_matrix();
    let roots = root_closure(&cartan_matrix);
    RootSystem {
        cartan_type,
        cartan_matrix,
        roots,
    }
}

fn poly_mul_one_minus(p: &[i128], k: usize, sign: i128) -> Vec<i128> {
    // p * (1 - t^k) when sign = 1.
    let mut out = vec![0i128; p.len() + k];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c;
        out[i + k] -= sign * c;
    }
    out
}

fn poly_div_one_minus(p: &[i128], k: usize) -> Option<Vec<i128>> {
    // Exact division by (1 - t^k).
    if p.len() <= k {
        return None;
    }
    let mut rem = p.to_vec();
    let mut q = vec![0i128; p.len() - k];
    for i in 0..q.len() {
        let c = rem[i];
        q[i] = c;
        rem[i] -= c;
        rem[i + k] += c;
    }
    if rem.iter().all(|&c| c == 0) {
        Some(q)
    } else {
        None
    }
}

/// Fundamental degrees from the Poincare polynomial of the positive-root heights.
pub fn weyl_degrees(rs: &RootSystem) -> Result<Vec<u32>, RootError> {
    let fail = || RootError::Factorization(rs.cartan_type.to_string());
    let r = rs.rank();
    let max_h = rs
        .positive_roots()
        .map(|x| RootSystem::height(x))
        .max()
        .unwrap_or(0) as usize;
    // count[h] = number of positive roots of height h; count[0] stands for the rank.
    let mut count = vec![0i64; max_h + 2];
    count[0] = r as i64;
    for root in rs.positive_roots() {
        count[RootSystem::height(root) as usize] += 1;
    }
    // Q(t) = P(t)(1-t)^r = prod_h (1 - t^h)^(count[h-1] - count[h]).
    let mut q = vec![1i128];
    let mut divisors = Vec::new();
    for h in 1..=max_h + 1 {
        let e = count[h - 1] - count[h];
        if e > 0 {
            for _ in 0..e {
                q = poly_mul_one_minus(&q, h, 1);
            }
        } else {
            for _ in 0..(-e) {
                divisors.push(h);
            }
        }
    }
    for h in divisors {
        q = poly_div_one_minus(&q, h).ok_or_else(fail)?;
    }
    // Peel (1 - t^k) at the smallest nonzero exponent.
    let mut degrees = Vec::new();
    loop {
        while q.len() > 1 && *q.last().unwrap() == 0 {
            q.pop();
        }
        if q.len() == 1 {
            if q[0] != 1 {
                return Err(fail());
            }
            break;
        }
        let k = (1..q.len()).find(|&i| q[i] != 0).ok_or_else(fail)?;
        if q[k] > 0 {
            return Err(fail());
        }
        q = poly_div_one_minus(&q, k).ok_or_else(fail)?;
        degrees.push(k as u32);
    }
    if degrees.len() != r {
        return Err(fail());
    }
    degrees.sort_unstable();
    Ok(degrees)
}

/// Product of the degrees.
pub fn weyl_order(rs: &RootSystem) -> Result<u128, RootError> {
    Ok(weyl_degrees(rs)?.iter().map(|&d| d as u128).product())
}

/// Size of the Weyl orbit of `rho` in fundamental-weight coordinates.
///
/// `rho` has trivial stabilizer, so this equals the Weyl group order.
pub fn regular_orbit_size(cartan: &[Vec<i64>]) -> usize {
    let n = cartan.len();
    let start = vec![1i64; n];
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for i in 0..n {
            let c = w[i];
            let next: Vec<i64> = w.iter().zip(&cartan[i]).map(|(x, a)| x - c * a).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.len()
}

/// Simple roots together with the negative highest root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedDiagram {
    /// Node roots in simple-root coordinates; the last node is `-highest`.
    pub nodes: Vec<Vec<i64>>,
    /// Generalized Cartan matrix `<node_i, node_j^vee>`.
    pub cartan: Vec<Vec<i64>>,
}

impl ExtendedDiagram {
    /// Edge multiplicity between two nodes (product of the two pairings).
    pub fn bond(&self, i: usize, j: usize) -> i64 {
        if i == j {
            0
        } else {
            self.cartan[i][j] * self.cartan[j][i]
        }
    }
}

/// Cartan pairings `<x, y^vee>` among a list of roots.
pub fn pairing_matrix(rs: &RootSystem, roots: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let lengths = rs.simple_lengths();
    let norms: Vec<Ratio<i64>> = roots
        .iter()
        .map(|r| inner_product(&rs.cartan_matrix, &lengths, r, r))
        .collect();
    roots
        .iter()
        .map(|x| {
            roots
                .iter()
                .zip(&norms)
                .map(|(y, ny)| {
                    let v = inner_product(&rs.cartan_matrix, &lengths, x, y) * 2 / *ny;
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect()
}

pub fn extended_diagram(rs: &RootSystem) -> ExtendedDiagram {
    let n = rs.rank();
    let mut nodes: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect();
    nodes.push(rs.highest_root().iter().map(|c| -c).collect());
    let cartan = pairing_matrix(rs, &nodes);
    ExtendedDiagram { nodes, cartan }
}

/// A permutation of the simple roots preserving the Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
    pub order: u8,
}

impl DiagramAutomorphism {
    pub fn preserves(&self, cartan: &[Vec<i64>]) -> bool {
        let n = cartan.len();
        self.perm.len() == n
            && (0..n).all(|i| (0..n).all(|j| cartan[self.perm[i]][self.perm[j]] == cartan[i][j]))
    }

    fn from_perm(perm: Vec<usize>) -> Self {
        let mut order = 1u8;
        let mut cur = perm.clone();
        while cur.iter().enumerate().any(|(i, &p)| i != p) {
            cur = cur.iter().map(|&p| perm[p]).collect();
            order += 1;
        }
        DiagramAutomorphism { perm, order }
    }
}

/// Nontrivial generators of the diagram automorphism group.
pub fn diagram_automorphisms(ct: CartanType) -> Vec<DiagramAutomorphism> {
    let n = ct.rank;
    let mut out = Vec::new();
    match ct.family {
        Family::A if n >= 2 => out.push(DiagramAutomorphism::from_perm((0..n).rev().collect())),
        Family::D => {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(n - 2, n - 1);
            out.push(DiagramAutomorphism::from_perm(p));
            if n == 4 {
                out.push(DiagramAutomorphism::from_perm(vec![2, 1, 3, 0]));
            }
        }
        Family::E if n == 6 => out.push(DiagramAutomorphism::from_perm(vec![5, 1, 4, 3, 2, 0])),
        _ => {}
    }
    out
}

/// Twist orders available for a type: 1 always, 2 or 3 from diagram symmetries.
pub fn twist_orders(ct: CartanType) -> BTreeSet<u8> {
    let mut out = BTreeSet::from([1u8]);
    out.extend(diagram_automorphisms(ct).iter().map(|a| a.order));
    out
}

/// Degrees paired with the eigenvalue sign of an order-2 graph twist.
///
/// Order 1 gives all `+1`. Order 3 is not expressible by signs and is rejected.
pub fn twisted_degrees(rs: &RootSystem, twist: u8) -> Result<Vec<(u32, i8)>, RootError> {
    let degrees = weyl_degrees(rs)?;
    let ct = rs.cartan_type;
    if twist == 1 {
        return Ok(degrees.into_iter().map(|d| (d, 1)).collect());
    }
    if twist != 2 || !twist_orders(ct).contains(&2) {
        return Err(RootError::UnknownType(format!("{twist}{ct}")));
    }
    Ok(match ct.family {
        Family::A | Family::E => degrees
            .into_iter()
            .map(|d| (d, if d % 2 == 0 { 1 } else { -1 }))
            .collect(),
        Family::D => {
            let mut flipped = false;
            degrees
                .into_iter()
                .map(|d| {
                    if d as usize == ct.rank && !flipped {
                        flipped = true;
                        (d, -1)
                    } else {
                        (d, 1)
                    }
                })
                .collect()
        }
        _ => unreachable!("no order-2 twist"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types(max_rank: usize) -> Vec<CartanType> {
        let mut out = Vec::new();
        for (fam, lo) in [
            (Family::A, 1),
            (Family::B, 2),
            (Family::C, 2),
            (Family::D, 4),
        ] {
            for r in lo..=max_rank {
                out.push(CartanType::new(fam, r).unwrap());
            }
        }
        for s in ["E6", "E7", "E8", "F4", "G2"] {
            let ct: CartanType = s.parse().unwrap();
            if ct.rank <= max_rank {
                out.push(ct);
            }
        }
        out
    }

    fn known_degrees(ct: CartanType) -> Vec<u32> {
        let n = ct.rank as u32;
        match ct.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u32> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    #[test]
    fn cartan_matrices_are_valid() {
        for ct in all_types(8) {
            let a = ct.cartan_matrix();
            for i in 0..ct.rank {
                assert_eq!(a[i][i], 2);
                for j in 0..ct.rank {
                    if i != j {
                        assert!(a[i][j] <= 0);
                        assert!((0..=3).contains(&(a[i][j] * a[j][i])));
                        assert_eq!(a[i][j] == 0, a[j][i] == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn small_root_counts() {
        assert_eq!(build_root_system("A1").unwrap().roots.len(), 2);
        let g2 = build_root_system("G2").unwrap();
        assert_eq!(g2.roots.len(), 12);
        assert_eq!(g2.num_positive(), 6);
        assert_eq!(g2.highest_root(), &[3, 2]);
        let e8 = build_root_system("E8").unwrap();
        assert_eq!(e8.roots.len(), 240);
        assert_eq!(e8.num_positive(), 120);
    }

    #[test]
    fn roots_closed_under_negation_and_positive_or_negative() {
        for ct in all_types(8) {
            let rs = root_system_of(ct);
            let set: HashSet<&Vec<i64>> = rs.roots.iter().collect();
            assert_eq!(rs.roots.len() % 2, 0);
            assert_eq!(2 * rs.num_positive(), rs.roots.len());
            for r in &rs.roots {
                let neg: Vec<i64> = r.iter().map(|c| -c).collect();
                assert!(set.contains(&neg), "{ct}");
                assert!(r.iter().all(|&c| c >= 0) || r.iter().all(|&c| c <= 0));
            }
        }
    }

    #[test]
    fn closure_is_idempotent() {
        for ct in all_types(8) {
            let rs = root_system_of(ct);
            let set: HashSet<Vec<i64>> = rs.roots.iter().cloned().collect();
            for r in &rs.roots {
                for j in 0..ct.rank {
                    assert!(set.contains(&reflect(&rs.cartan_matrix, r, j)));
                }
            }
        }
    }

    #[test]
    fn degrees_match_reference_table() {
        for ct in all_types(8) {
            let rs = root_system_of(ct);
            let d = weyl_degrees(&rs).unwrap();
            assert_eq!(d, known_degrees(ct), "{ct}");
            let exps: u32 = d.iter().map(|x| x - 1).sum();
            assert_eq!(exps as usize, rs.num_positive(), "{ct}");
        }
        let e8 = build_root_system("E8").unwrap();
        assert_eq!(weyl_order(&e8).unwrap(), 696_729_600);
        let g2 = build_root_system("G2").unwrap();
        assert_eq!(weyl_order(&g2).unwrap(), 12);
    }

    #[test]
    fn orbit_stabilizer_matches_degree_product() {
        for ct in all_types(4) {
            let rs = root_system_of(ct);
            let orbit = regular_orbit_size(&rs.cartan_matrix) as u128;
            assert_eq!(orbit, weyl_order(&rs).unwrap(), "{ct}");
        }
    }

    #[test]
    fn corrupted_root_system_fails_to_factor() {
        let mut rs = build_root_system("B3").unwrap();
        let extra = rs
            .roots
            .iter()
            .position(|r| RootSystem::height(r) == 2)
            .unwrap();
        rs.roots.remove(extra);
        assert!(weyl_degrees(&rs).is_err());
    }

    #[test]
    fn extended_diagrams() {
        let a1 = extended_diagram(&build_root_system("A1").unwrap());
        assert_eq!(a1.nodes.len(), 2);
        assert_eq!(a1.bond(0, 1), 4);
        let g2 = extended_diagram(&build_root_system("G2").unwrap());
        assert_eq!(g2.nodes.len(), 3);
        // The affine node hangs off the long simple root.
        assert_eq!(g2.bond(2, 1), 1);
        assert_eq!(g2.bond(2, 0), 0);
        assert_eq!(g2.bond(0, 1), 3);
        let e8 = extended_diagram(&build_root_system("E8").unwrap());
        assert_eq!(e8.nodes.len(), 9);
        let edges: i64 = (0..9)
            .flat_map(|i| (i + 1..9).map(move |j| (i, j)))
            .map(|(i, j)| e8.bond(i, j))
            .sum();
        assert_eq!(edges, 8);
        assert_eq!(e8.bond(8, 7), 1);
    }

    #[test]
    fn automorphisms_preserve_cartan() {
        for ct in all_types(8) {
            let a = ct.cartan_matrix();
            for aut in diagram_automorphisms(ct) {
                assert!(aut.preserves(&a), "{ct}");
                assert!(
                    aut.order == 2 || (aut.order == 3 && ct.family == Family::D && ct.rank == 4)
                );
            }
        }
        assert!(twist_orders("D4".parse().unwrap()).contains(&3));
        assert!(!twist_orders("E7".parse().unwrap()).contains(&2));
    }

    #[test]
    fn twisted_e6_signs() {
        let rs = build_root_system("E6").unwrap();
        let t = twisted_degrees(&rs, 2).unwrap();
        assert_eq!(t, vec![(2, 1), (5, -1), (6, 1), (8, 1), (9, -1), (12, 1)]);
        let d4 = twisted_degrees(&build_root_system("D4").unwrap(), 2).unwrap();
        assert_eq!(d4.iter().filter(|x| x.1 == -1).count(), 1);
        assert!(twisted_degrees(&rs, 3).is_err());
    }

    #[test]
    fn unknown_labels_rejected() {
        assert!(build_root_system("E9").is_err());
        assert!(build_root_system("D3").is_err());
        assert!(build_root_system("X2").is_err());
        assert!(build_root_system("").is_err());
    }
}
