//! Sylow Phi_e-tori, e-split Levi subgroups and relative Weyl groups.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::centralizers::Ambient;
use crate::generic_order::{ennola_index, group_order, GenericOrder};
use crate::partitions::partitions;
use crate::rational_type::{Component, RationalType, TypeKey};
use crate::rootdata::{CartanType, Family};
use crate::unipotent_db::{admissible_q, Database, DbError, SAMPLE_Q};

/// An e-split Levi subgroup with the multiplicity of `Phi_e` in its centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ESplitLevi {
    pub levi: RationalType,
    pub center_e_part: i32,
    pub ambient: RationalType,
}

/// A stored `levi <ambient> <e> <type>` record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviRecord {
    pub ambient: String,
    pub e: u32,
    pub levi: RationalType,
    pub line: usize,
}

impl LeviRecord {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        let [ambient, e, levi] = args else {
            return Err("levi expects ambient, e and a rational type".into());
        };
        ambient.parse::<Ambient>().map_err(|e| e.to_string())?;
        Ok(LeviRecord {
            ambient: ambient.to_string(),
            e: e.parse().map_err(|_| format!("bad e `{e}`"))?,
            levi: levi
                .parse()
                .map_err(|e: crate::rational_type::TypeError| e.to_string())?,
            line: 0,
        })
    }

    pub(crate) fn at(mut self, line: usize) -> Self {
        self.line = line;
        self
    }

    pub(crate) fn validate(&self) -> Result<(), DbError> {
        let g = self
            .ambient
            .parse::<Ambient>()
            .expect("checked on parse")
            .rational_type();
        check_levi(&g, &self.levi, self.e, &self.ambient).map_err(|msg| DbError::Invariant {
            line: self.line,
            record: format!("levi {} {} {}", self.ambient, self.e, self.levi),
            msg,
        })
    }
}

/// Rank, Sylow-torus and divisibility checks of a Levi `l` of `g`.
fn check_levi(g: &RationalType, l: &RationalType, e: u32, label: &str) -> Result<(), String> {
    let go = group_order(g).map_err(|e| e.to_string())?;
    let lo = group_order(l).map_err(|e| e.to_string())?;
    if g.rank() != l.rank() {
        return Err(format!(
            "rank {} differs from the ambient rank {}",
            l.rank(),
            g.rank()
        ));
    }
    if go.multiplicity(e) != lo.multiplicity(e) {
        return Err(format!("Phi{e}-multiplicity differs from the ambient one"));
    }
    for q in SAMPLE_Q.into_iter().filter(|&q| admissible_q(label, q)) {
        let ratio = go.eval(&q.into()) / lo.eval(&q.into());
        if !ratio.is_integer() {
            return Err(format!(
                "order does not divide the ambient order at q = {q}"
            ));
        }
    }
    Ok(())
}

/// A stored relative Weyl group `relweyl <ambient> <L> <lambda> <label> <order>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelWeylRecord {
    pub ambient: String,
    pub levi: String,
    pub lambda: String,
    pub label: String,
    pub order: u64,
}

impl RelWeylRecord {
    pub(crate) fn from_fields(args: &[&str]) -> Result<Self, String> {
        let [ambient, levi, lambda, label, order] = args else {
            return Err("relweyl expects ambient, L, lambda, label and order".into());
        };
        let order: u64 = order.parse().map_err(|_| format!("bad order `{order}`"))?;
        if coxeter_order(label) != Some(order) {
            return Err(format!("order {order} does not match label `{label}`"));
        }
        Ok(RelWeylRecord {
            ambient: ambient.to_string(),
            levi: levi.to_string(),
            lambda: lambda.to_string(),
            label: label.to_string(),
            order,
        })
    }
}

/// A relative Weyl group as a label with its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeWeylGroup {
    pub label: String,
    pub order: u64,
}

/// Order of a Coxeter-type label such as `A5xA1`, `Z4xA1`, `B2^2xA1`, `A2.2`,
/// `E6.2` or `1`.
pub fn coxeter_order(label: &str) -> Option<u64> {
    if label == "1" {
        return Some(1);
    }
    let mut total = 1u64;
    for factor in label.split('x') {
        let (body, ext) = match factor.split_once('.') {
            Some((b, n)) => (b, n.parse::<u64>().ok()?),
            None => (factor, 1),
        };
        let (base, power) = match body.split_once('^') {
            Some((b, k)) => (b, k.parse::<u32>().ok()?),
            None => (body, 1),
        };
        let one = if let Some(n) = base.strip_prefix('Z') {
            n.parse::<u64>().ok()?
        } else if let Ok(n) = base.parse::<u64>() {
            n
        } else {
            weyl_group_order(base.parse().ok()?)
        };
        total = total.checked_mul(one.checked_pow(power)?.checked_mul(ext)?)?;
    }
    Some(total)
}

/// `|W|` of an irreducible Cartan type by the classical closed forms.
fn weyl_group_order(ct: CartanType) -> u64 {
    let n = ct.rank as u64;
    let fact = |k: u64| (1..=k).product::<u64>();
    match (ct.family, n) {
        (Family::A, _) => fact(n + 1),
        (Family::B, _) | (Family::C, _) => (1 << n) * fact(n),
        (Family::D, _) => (1 << (n - 1)) * fact(n),
        (Family::E, 6) => 51840,
        (Family::E, 7) => 2903040,
        (Family::E, _) => 696729600,
        (Family::F, _) => 1152,
        (Family::G, _) => 12,
    }
}

/// Multiplicity `a(e)` of `Phi_e` in the order of `g`.
pub fn sylow_e_torus_multiplicity(g: &RationalType, e: u32) -> Result<i32, DbError> {
    Ok(group_order(g)?.multiplicity(e))
}

fn to_levi(g: &RationalType, levi: RationalType, e: u32) -> ESplitLevi {
    ESplitLevi {
        center_e_part: levi.torus().multiplicity(e),
        levi,
        ambient: g.clone(),
    }
}

/// All e-split Levi subgroups of an ambient, up to conjugacy.
///
/// Type A ambients are computed; exceptional ones come from the dataset, with
/// twisted forms and Ennola-dual `e` generated by the Ennola transform.
pub fn e_split_levis(db: &Database, ambient: &str, e: u32) -> Result<Vec<ESplitLevi>, DbError> {
    let amb: Ambient = ambient
        .parse()
        .map_err(|_| DbError::Uncovered(format!("ambient {ambient}")))?;
    let g = amb.rational_type();
    if amb.cartan_type.family == Family::A {
        let n = amb.cartan_type.rank as u32 + 1;
        let list = if amb.twist == 2 {
            type_a_levis(n, ennola_index(e))
                .iter()
                .map(|l| l.ennola())
                .collect()
        } else {
            type_a_levis(n, e)
        };
        return Ok(list.into_iter().map(|l| to_levi(&g, l, e)).collect());
    }
    let key = format!(
        "{}{}",
        if amb.twist == 1 {
            String::new()
        } else {
            amb.twist.to_string()
        },
        amb.cartan_type
    );
    let stored = |k: &str, e: u32| -> Vec<RationalType> {
        db.levis
            .iter()
            .filter(|r| {
                r.e == e
                    && r.ambient
                        .parse::<Ambient>()
                        .map(|a| ambient_key(&a) == k)
                        .unwrap_or(false)
            })
            .map(|r| r.levi.clone())
            .collect()
    };
    let direct = stored(&key, e);
    let list = if !direct.is_empty() {
        direct
    } else {
        let dual_key = ennola_ambient_key(&amb);
        let dual = stored(&dual_key, ennola_index(e));
        if dual.is_empty() {
            return Err(DbError::Uncovered(format!("{e}-split Levis of {ambient}")));
        }
        dual.iter().map(|l| l.ennola()).collect()
    };
    let out: Vec<ESplitLevi> = list.into_iter().map(|l| to_levi(&g, l, e)).collect();
    for l in &out {
        check_levi(&g, &l.levi, e, ambient).map_err(|msg| DbError::Invariant {
            line: 0,
            record: format!("generated Levi {}", l.levi),
            msg,
        })?;
    }
    Ok(out)
}

fn ambient_key(a: &Ambient) -> String {
    format!(
        "{}{}",
        if a.twist == 1 {
            String::new()
        } else {
            a.twist.to_string()
        },
        a.cartan_type
    )
}

fn ennola_ambient_key(a: &Ambient) -> String {
    let flips = Component {
        cartan_type: a.cartan_type,
        twist: a.twist,
        field: 1,
        power: 1,
        bare: false,
    }
    .ennola_flips();
    let twist = if flips { 3 - a.twist } else { a.twist };
    ambient_key(&Ambient { twist, ..*a })
}

/// e-split Levis of `SL_n(q)`: `prod GL_{a_i}(q^e) x GL_m(q)` intersected with
/// `SL_n`, for partitions `(a_i)` of `w` and `m = n - e w`; for `e = 1` the
/// Levis of block shape given by the partitions of `n`.
pub fn type_a_levis(n: u32, e: u32) -> Vec<RationalType> {
    let mut out = Vec::new();
    if e == 1 {
        for p in partitions(n) {
            out.push(sl_levi(&p.iter().map(|&a| (a, 1)).collect::<Vec<_>>()));
        }
        return out;
    }
    for w in (0..=n / e).rev() {
        let m = n - e * w;
        for p in partitions(w) {
            let mut blocks: Vec<(u32, u32)> = p.iter().map(|&a| (a, e)).collect();
            if m > 0 {
                blocks.push((m, 1));
            }
            out.push(sl_levi(&blocks));
        }
    }
    out
}

/// `prod GL_a(q^k)` over the blocks `(a, k)`, intersected with `SL`.
fn sl_levi(blocks: &[(u32, u32)]) -> RationalType {
    let mut torus = GenericOrder::phi(1, -1);
    let mut comps: Vec<Component> = Vec::new();
    for &(a, k) in blocks {
        for d in (1..=k).filter(|d| k % d == 0) {
            torus = &torus * &GenericOrder::phi(d, 1);
        }
        if a >= 2 {
            let ct = CartanType::new(Family::A, a as usize - 1).expect("type A rank");
            match comps
                .iter_mut()
                .find(|c| c.cartan_type == ct && c.field == k)
            {
                Some(c) => c.power += 1,
                None => comps.push(Component {
                    cartan_type: ct,
                    twist: 1,
                    field: k,
                    power: 1,
                    bare: false,
                }),
            }
        }
    }
    comps.sort_by(|x, y| {
        y.cartan_type
            .rank
            .cmp(&x.cartan_type.rank)
            .then(y.field.cmp(&x.field))
    });
    RationalType::compose(&torus, &comps)
}

/// Brute-force e-split Levis of `SL_n(q)`: for every set partition `J` of
/// `{0..n-1}` and permutation `w` preserving it, the twisted Levi `L_{J,w}` is
/// e-split iff the points not separated by `ker Phi_e(w)` on the block-constant
/// sum-zero vectors are exactly the blocks of `J`.
pub fn brute_force_type_a_levis(n: usize, e: u32) -> BTreeSet<TypeKey> {
    let phi = crate::generic_order::cyclotomic(e);
    let mut out = BTreeSet::new();
    for blocks in set_partitions(n) {
        let block_of: Vec<usize> = (0..n)
            .map(|i| {
                blocks
                    .iter()
                    .position(|b| b.contains(&i))
                    .expect("covering")
            })
            .collect();
        for w in permutations(n) {
            let preserves = (0..n).all(|i| {
                (0..n).all(|j| (block_of[i] == block_of[j]) == (block_of[w[i]] == block_of[w[j]]))
            });
            if !preserves {
                continue;
            }
            let mut rows: Vec<Vec<BigRational>> = Vec::new();
            let pm = perm_matrix(&w);
            let phi_w = poly_at_matrix(&phi.0, &pm);
            rows.extend(phi_w);
            rows.push(vec![BigRational::one(); n]);
            for b in &blocks {
                for pair in b.windows(2) {
                    let mut r = vec![BigRational::zero(); n];
                    r[pair[0]] = BigRational::one();
                    r[pair[1]] = -BigRational::one();
                    rows.push(r);
                }
            }
            let kernel = nullspace(rows, n);
            let same = |i: usize, j: usize| kernel.iter().all(|v| v[i] == v[j]);
            let split = (0..n).all(|i| (0..n).all(|j| same(i, j) == (block_of[i] == block_of[j])));
            if split {
                out.insert(twisted_sl_levi(&blocks, &block_of, &w).key());
            }
        }
    }
    out
}

fn twisted_sl_levi(blocks: &[Vec<usize>], block_of: &[usize], w: &[usize]) -> RationalType {
    let mut seen = vec![false; blocks.len()];
    let mut cycles = Vec::new();
    for start in 0..blocks.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut b = start;
        while !seen[b] {
            seen[b] = true;
            len += 1;
            b = block_of[w[blocks[b][0]]];
        }
        cycles.push((blocks[start].len() as u32, len as u32));
    }
    sl_levi(&cycles)
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for i in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for k in 0..p.len() {
                let mut q = p.clone();
                q[k].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn perm_matrix(w: &[usize]) -> Vec<Vec<BigRational>> {
    let n = w.len();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for (i, &j) in w.iter().enumerate() {
        m[j][i] = BigRational::one();
    }
    m
}

fn poly_at_matrix(coeffs: &[BigInt], m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut acc = vec![vec![BigRational::zero(); n]; n];
    for c in coeffs.iter().rev() {
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for k in 0..n {
                    s += &acc[i][k] * &m[k][j];
                }
                next[i][j] = s;
            }
            next[i][i] += BigRational::from_integer(c.clone());
        }
        acc = next;
    }
    acc
}

/// Basis of the rational nullspace of the given rows.
fn nullspace(mut rows: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[k][f].clone();
            }
            v
        })
        .collect()
}

/// Relative Weyl group `W_G(L, lambda)`: a stored `relweyl` record, else the
/// column of a stored block row of the series with the same Levi and character.
pub fn relative_weyl_group(
    db: &Database,
    ambient: &str,
    series: &str,
    levi: &str,
    lambda: &str,
) -> Result<RelativeWeylGroup, DbError> {
    if let Some(r) = db
        .relweyl
        .iter()
        .find(|r| r.ambient == ambient && r.levi == levi && r.lambda == lambda)
    {
        return Ok(RelativeWeylGroup {
            label: r.label.clone(),
            order: r.order,
        });
    }
    for row in &db.block_rows {
        if row.ambient == ambient
            && row.series == series
            && row.levi == levi
            && row.lambda.to_string() == lambda
        {
            let order = coxeter_order(&row.relweyl)
                .ok_or_else(|| DbError::Uncovered(format!("order of {}", row.relweyl)))?;
            return Ok(RelativeWeylGroup {
                label: row.relweyl.clone(),
                order,
            });
        }
    }
    Err(DbError::Uncovered(format!(
        "relative Weyl group of ({levi}, {lambda}) in {ambient}"
    )))
}

/// Relative Weyl group of the minimal e-split Levi of `SL_n` by enumeration:
/// the centralizer in `S_n` of a regular element for the Sylow `Phi_e`-torus,
/// taken for `e` in `{1, 2}`.
pub fn minimal_relative_weyl_order(n: usize, e: u32) -> u64 {
    let w: Vec<usize> = if e == 1 {
        (0..n).collect()
    } else {
        (0..n).rev().collect()
    };
    permutations(n)
        .iter()
        .filter(|x| (0..n).all(|i| x[w[i]] == w[x[i]]))
        .count() as u64
}
