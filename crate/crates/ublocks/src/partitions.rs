//! Type-A unipotent combinatorics: partitions, hook-formula degrees, e-cores
//! and e-cuspidality for factors `A_{n-1}(q^k)` and `2A_{n-1}(q^k)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use crate::generic_order::{ennola_index, GenericOrder};
use crate::rational_type::Component;
use crate::rootdata::Family;

/// A partition as a weakly decreasing list of positive parts.
pub type Partition = Vec<u32>;

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Partition, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Conjugate partition.
pub fn conjugate(lambda: &[u32]) -> Partition {
    let first = lambda.first().copied().unwrap_or(0);
    (1..=first)
        .map(|j| lambda.iter().filter(|&&p| p >= j).count() as u32)
        .collect()
}

/// Hook lengths of all boxes.
pub fn hooks(lambda: &[u32]) -> Vec<u32> {
    let conj = conjugate(lambda);
    let mut out = Vec::new();
    for (i, &row) in lambda.iter().enumerate() {
        for j in 0..row as usize {
            let arm = row - j as u32 - 1;
            let leg = conj[j] - i as u32 - 1;
            out.push(arm + leg + 1);
        }
    }
    out
}

/// `n(lambda) = sum (i-1) lambda_i`.
pub fn n_of(lambda: &[u32]) -> u32 {
    lambda.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
}

/// Add `sign * prod_{d | m} Phi_d` to a cyclotomic exponent map.
fn add_q_pow_minus_one(cyclo: &mut BTreeMap<u32, i32>, m: u32, sign: i32) {
    for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
        *cyclo.entry(d).or_insert(0) += sign;
    }
}

/// Unipotent degree of `lambda` in `GL_n(q^k)`:
/// `q^{k n(lambda)} prod (q^{ki}-1) / prod_h (q^{kh}-1)`.
pub fn gl_degree(lambda: &[u32], field: u32) -> GenericOrder {
    let n: u32 = lambda.iter().sum();
    let mut cyclo = BTreeMap::new();
    for i in 1..=n {
        add_q_pow_minus_one(&mut cyclo, i * field, 1);
    }
    for h in hooks(lambda) {
        add_q_pow_minus_one(&mut cyclo, h * field, -1);
    }
    cyclo.retain(|_, a| *a != 0);
    GenericOrder::new(BigRational::one(), field * n_of(lambda), cyclo)
}

/// Unipotent degree of `lambda` in a type-A component, Ennola-transported
/// when the component is twisted.
pub fn component_degree(lambda: &[u32], comp: &Component) -> GenericOrder {
    let d = gl_degree(lambda, comp.field);
    if comp.twist == 2 {
        d.ennola()
    } else {
        d
    }
}

/// Beta-set with `len` beads of a partition.
fn beta_set(lambda: &[u32], len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| lambda.get(i).copied().unwrap_or(0) + (len - 1 - i) as u32)
        .collect()
}

/// The `e`-core of `lambda` and its `e`-weight.
pub fn core(lambda: &[u32], e: u32) -> (Partition, u32) {
    if e == 0 {
        return (lambda.to_vec(), 0);
    }
    let len = lambda.len() + e as usize;
    let beta = beta_set(lambda, len);
    let mut runners: Vec<usize> = vec![0; e as usize];
    for b in &beta {
        runners[(b % e) as usize] += 1;
    }
    let mut slid = Vec::with_capacity(len);
    for (r, &count) in runners.iter().enumerate() {
        for k in 0..count {
            slid.push(r as u32 + k as u32 * e);
        }
    }
    slid.sort_unstable_by(|a, b| b.cmp(a));
    let parts: Partition = slid
        .iter()
        .enumerate()
        .map(|(i, &b)| b - (len - 1 - i) as u32)
        .filter(|&p| p > 0)
        .collect();
    let size: u32 = lambda.iter().sum();
    let core_size: u32 = parts.iter().sum();
    (parts, (size - core_size) / e)
}

/// The effective `e` for a type-A factor: Ennola-transport for a twist, then
/// divide by the field exponent.
pub fn effective_e(comp: &Component, e: u32) -> u32 {
    let e = if comp.twist == 2 { ennola_index(e) } else { e };
    e / num_integer::gcd(e, comp.field)
}

/// Rank-plus-one `n` of a type-A component, or `None` for other families.
pub fn type_a_size(comp: &Component) -> Option<u32> {
    (comp.cartan_type.family == Family::A).then_some(comp.cartan_type.rank as u32 + 1)
}

/// Canonical label: `1` for the trivial partition, else `phi{...}`.
pub fn label(lambda: &[u32]) -> String {
    if lambda.len() <= 1 {
        return "1".to_string();
    }
    let digits: String = lambda.iter().map(|p| p.to_string()).collect();
    format!("phi{{{digits}}}")
}

/// Parse `1`, `phi{21}` or `phi{3}` as a partition of `n`.
pub fn parse_label(s: &str, n: u32) -> Option<Partition> {
    if s == "1" {
        return Some(vec![n]);
    }
    let digits = s.strip_prefix("phi{")?.strip_suffix('}')?;
    let parts: Option<Partition> = digits
        .chars()
        .map(|c| c.to_digit(10).filter(|&d| d > 0))
        .collect();
    let parts = parts?;
    let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
    (sorted && parts.iter().sum::<u32>() == n).then_some(parts)
}

/// Number of `e`-cores `c` with `|c| <= n` and `|c| = n mod e`: the number of
/// unipotent `e`-cuspidal pairs of `GL_n`.
pub fn cuspidal_pair_count(n: u32, e: u32) -> usize {
    let mut cores: Vec<Partition> = (0..=n)
        .filter(|m| (n - m).is_multiple_of(e))
        .flat_map(partitions)
        .filter(|p| core(p, e).1 == 0)
        .collect();
    cores.sort();
    cores.dedup();
    cores.len()
}

/// Unipotent `e`-cuspidal partitions of `n`: those equal to their `e`-core.
pub fn cuspidal_partitions(n: u32, e: u32) -> Vec<Partition> {
    partitions(n)
        .into_iter()
        .filter(|p| core(p, e).1 == 0)
        .collect()
}
