//! Rational types: products of twisted simple factors over extension fields
//! together with a torus part, written in an ASCII notation such as
//! `Phi1^2Phi2.2A2(q)`, `A2(q^2).2A2(q)` or `Phi1^4.(A1(q)^3)'`.
//!
//! The parsed form keeps the layout of the source (separators, groups and
//! primes), so printing a parsed value reproduces its input byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::generic_order::{ennola_index, GenericOrder};
use crate::rootdata::{twist_orders, CartanType, Family};

/// Errors from rational-type parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("cannot parse rational type `{input}` at column {col}: {msg}")]
    Parse {
        input: String,
        col: usize,
        msg: String,
    },
}

/// One simple factor `tX_r(q^k)^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub cartan_type: CartanType,
    /// Order of the graph twist: 1, 2 or 3.
    pub twist: u8,
    /// Field exponent `k` in `q^k`.
    pub field: u32,
    /// Number of isomorphic copies.
    pub power: u32,
    /// Written without a field, as in the bare label `D4`.
    pub bare: bool,
}

impl Component {
    /// True when `q -> -q` changes the twist of this factor.
    pub fn ennola_flips(&self) -> bool {
        let ct = self.cartan_type;
        let outer = match ct.family {
            Family::A => ct.rank >= 2,
            Family::D => ct.rank % 2 == 1,
            Family::E => ct.rank == 6,
            _ => false,
        };
        outer && self.field % 2 == 1 && self.twist != 3
    }

    fn ennola(&self) -> Component {
        let mut c = self.clone();
        if c.ennola_flips() {
            c.twist = if c.twist == 1 { 2 } else { 1 };
        }
        c
    }

    /// The factor with `power = 1`.
    pub fn single(&self) -> Component {
        Component {
            power: 1,
            ..self.clone()
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist != 1 {
            write!(f, "{}", self.twist)?;
        }
        write!(f, "{}", self.cartan_type)?;
        if !self.bare {
            if self.field == 1 {
                write!(f, "(q)")?;
            } else {
                write!(f, "(q^{})", self.field)?;
            }
        }
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

/// A layout item of a rational type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Item {
    /// Juxtaposed cyclotomic torus factors `(d, a)`.
    Torus(Vec<(u32, u32)>),
    /// The `.` separator.
    Sep,
    Comp(Component),
    /// A parenthesized product with primes and a power, e.g. `(A1(q)^3)'`.
    Group {
        inner: Vec<Item>,
        primes: u8,
        power: u32,
    },
    /// A component-group extension such as the trailing `.2`.
    Ext(u32),
}

/// A rational type with its written layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalType {
    items: Vec<Item>,
}

/// Structural identity of a rational type, independent of layout.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeKey {
    /// `(type, twist, field) -> multiplicity`.
    pub components: BTreeMap<(CartanType, u8, u32), u32>,
    /// Cyclotomic multiplicities of the torus part.
    pub torus: BTreeMap<u32, i32>,
    pub extension: u32,
}

impl RationalType {
    pub fn from_items(items: Vec<Item>) -> Self {
        RationalType { items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        RationalType { items: Vec::new() }
    }

    /// A pure torus with the given cyclotomic multiplicities.
    pub fn torus_only(torus: &GenericOrder) -> Self {
        let t: Vec<(u32, u32)> = torus
            .cyclo()
            .iter()
            .filter(|(_, &a)| a > 0)
            .map(|(&d, &a)| (d, a as u32))
            .collect();
        if t.is_empty() {
            Self::trivial()
        } else {
            RationalType {
                items: vec![Item::Torus(t)],
            }
        }
    }

    /// Torus part times a list of factors, written `T.X1X2`.
    pub fn compose(torus: &GenericOrder, comps: &[Component]) -> Self {
        let mut items = Self::torus_only(torus).items;
        if !items.is_empty() && !comps.is_empty() {
            items.push(Item::Sep);
        }
        items.extend(comps.iter().cloned().map(Item::Comp));
        RationalType { items }
    }

    fn walk<'a>(items: &'a [Item], mult: u32, f: &mut impl FnMut(&'a Item, u32)) {
        for it in items {
            match it {
                Item::Group { inner, power, .. } => Self::walk(inner, mult * power, f),
                other => f(other, mult),
            }
        }
    }

    /// Simple factors with powers multiplied out through groups.
    pub fn components(&self) -> Vec<Component> {
        let mut out = Vec::new();
        Self::walk(&self.items, 1, &mut |it, m| {
            if let Item::Comp(c) = it {
                out.push(Component {
                    power: c.power * m,
                    ..c.clone()
                });
            }
        });
        out
    }

    /// The torus part as a cyclotomic product.
    pub fn torus(&self) -> GenericOrder {
        let mut cyclo = BTreeMap::new();
        Self::walk(&self.items, 1, &mut |it, m| {
            if let Item::Torus(t) = it {
                for &(d, a) in t {
                    *cyclo.entry(d).or_insert(0) += (a * m) as i32;
                }
            }
        });
        GenericOrder::new(BigRational::one(), 0, cyclo)
    }

    /// Product of the component-group extensions, 1 if none.
    pub fn extension(&self) -> u32 {
        let mut e = 1;
        Self::walk(&self.items, 1, &mut |it, _| {
            if let Item::Ext(n) = it {
                e *= n;
            }
        });
        e
    }

    pub fn key(&self) -> TypeKey {
        let mut components = BTreeMap::new();
        for c in self.components() {
            *components
                .entry((c.cartan_type, c.twist, c.field))
                .or_insert(0) += c.power;
        }
        TypeKey {
            components,
            torus: self.torus().cyclo().clone(),
            extension: self.extension(),
        }
    }

    /// Same structure regardless of layout.
    pub fn same_as(&self, other: &RationalType) -> bool {
        self.key() == other.key()
    }

    /// Semisimple rank: rank of the factors counted over the algebraic closure.
    pub fn semisimple_rank(&self) -> usize {
        self.components()
            .iter()
            .map(|c| c.cartan_type.rank * (c.field * c.power) as usize)
            .sum()
    }

    /// Total rank: semisimple rank plus the torus dimension.
    pub fn rank(&self) -> usize {
        let torus: usize = self
            .torus()
            .cyclo()
            .iter()
            .map(|(&d, &a)| totient(d) as usize * a.max(0) as usize)
            .sum();
        self.semisimple_rank() + torus
    }

    /// Geometric root types, one entry per simple factor over the closure.
    pub fn geometric_types(&self) -> Vec<CartanType> {
        let mut out = Vec::new();
        for c in self.components() {
            for _ in 0..c.field * c.power {
                out.push(c.cartan_type);
            }
        }
        out
    }

    /// Canonical label of the geometric semisimple type, e.g. `E6A2`.
    pub fn semisimple_label(&self) -> String {
        subsystem_label(
            self.geometric_types()
                .into_iter()
                .map(|t| (t, false))
                .collect(),
        )
    }

    /// True if every factor is of classical type.
    pub fn all_classical(&self) -> bool {
        self.components()
            .iter()
            .all(|c| c.cartan_type.is_classical())
    }

    /// True if the type has no simple factors.
    pub fn is_torus(&self) -> bool {
        self.components().is_empty()
    }

    /// Image under `q -> -q`, keeping the layout; torus factors are
    /// re-sorted by cyclotomic index.
    pub fn ennola(&self) -> RationalType {
        fn map(items: &[Item]) -> Vec<Item> {
            items
                .iter()
                .map(|it| match it {
                    Item::Torus(t) => {
                        let mut t: Vec<(u32, u32)> =
                            t.iter().map(|&(d, a)| (ennola_index(d), a)).collect();
                        t.sort();
                        Item::Torus(t)
                    }
                    Item::Comp(c) => Item::Comp(c.ennola()),
                    Item::Group {
                        inner,
                        primes,
                        power,
                    } => Item::Group {
                        inner: map(inner),
                        primes: *primes,
                        power: *power,
                    },
                    other => other.clone(),
                })
                .collect()
        }
        RationalType {
            items: map(&self.items),
        }
    }
}

/// Euler's totient, the degree of `Phi_d`.
pub fn totient(d: u32) -> u32 {
    (1..=d).filter(|k| num_integer::gcd(*k, d) == 1).count() as u32
}

/// Canonical label of a multiset of root-system components.
///
/// Components are sorted by decreasing rank, then family, with short-root
/// components (marked `~`) after long ones. The empty system is `none`.
pub fn subsystem_label(mut comps: Vec<(CartanType, bool)>) -> String {
    if comps.is_empty() {
        return "none".to_string();
    }
    comps.sort_by(|a, b| {
        b.0.rank
            .cmp(&a.0.rank)
            .then(a.0.family.cmp(&b.0.family))
            .then(a.1.cmp(&b.1))
    });
    comps
        .iter()
        .map(|(t, short)| {
            if *short {
                format!("{t}~")
            } else {
                t.to_string()
            }
        })
        .collect()
}

impl fmt::Display for RationalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_items(items: &[Item], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for it in items {
                match it {
                    Item::Torus(t) => {
                        for &(d, a) in t {
                            write!(f, "Phi{d}")?;
                            if a != 1 {
                                write!(f, "^{a}")?;
                            }
                        }
                    }
                    Item::Sep => write!(f, ".")?,
                    Item::Comp(c) => write!(f, "{c}")?,
                    Item::Group {
                        inner,
                        primes,
                        power,
                    } => {
                        write!(f, "(")?;
                        write_items(inner, f)?;
                        write!(f, ")")?;
                        for _ in 0..*primes {
                            write!(f, "'")?;
                        }
                        if *power != 1 {
                            write!(f, "^{power}")?;
                        }
                    }
                    Item::Ext(n) => write!(f, "{n}")?,
                }
            }
            Ok(())
        }
        if self.items.is_empty() {
            return write!(f, "1");
        }
        write_items(&self.items, f)
    }
}

struct Parser<'a> {
    input: &'a str,
    b: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> TypeError {
        TypeError::Parse {
            input: self.input.to_string(),
            col: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.b.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.b.get(self.pos + k).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn starts(&self, s: &str) -> bool {
        self.b[self.pos..].starts_with(s.as_bytes())
    }

    fn number(&mut self) -> Result<u32, TypeError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.b[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.err("number too large"))
    }

    fn power(&mut self) -> Result<u32, TypeError> {
        if self.eat(b'^') {
            let p = self.number()?;
            if p == 0 {
                return Err(self.err("power must be positive"));
            }
            Ok(p)
        } else {
            Ok(1)
        }
    }

    fn is_type_letter(c: Option<u8>) -> bool {
        c.is_some_and(|c| (b'A'..=b'G').contains(&c))
    }

    fn items(&mut self, nested: bool) -> Result<Vec<Item>, TypeError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(b')') if nested => break,
                Some(b'.') => {
                    self.pos += 1;
                    items.push(Item::Sep);
                }
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.items(true)?;
                    if !self.eat(b')') {
                        return Err(self.err("expected `)`"));
                    }
                    let mut primes = 0;
                    while self.eat(b'\'') {
                        primes += 1;
                    }
                    let power = self.power()?;
                    items.push(Item::Group {
                        inner,
                        primes,
                        power,
                    });
                }
                Some(b'P') if self.starts("Phi") => {
                    let mut t = Vec::new();
                    while self.starts("Phi") {
                        self.pos += 3;
                        let d = self.number()?;
                        if d == 0 {
                            return Err(self.err("Phi index must be positive"));
                        }
                        t.push((d, self.power()?));
                    }
                    items.push(Item::Torus(t));
                }
                Some(c) if c.is_ascii_digit() => {
                    if Self::is_type_letter(self.peek_at(1)) && (c == b'2' || c == b'3') {
                        self.pos += 1;
                        items.push(Item::Comp(self.component(c - b'0')?));
                    } else {
                        let n = self.number()?;
                        if Self::is_type_letter(self.peek()) {
                            return Err(self.err("twist prefix must be 2 or 3"));
                        }
                        items.push(Item::Ext(n));
                    }
                }
                Some(c) if Self::is_type_letter(Some(c)) => {
                    items.push(Item::Comp(self.component(1)?))
                }
                Some(_) => return Err(self.err("unexpected character")),
            }
        }
        Ok(items)
    }

    fn component(&mut self, twist: u8) -> Result<Component, TypeError> {
        let letter = self
            .peek()
            .ok_or_else(|| self.err("expected a type letter"))? as char;
        self.pos += 1;
        let family = Family::from_letter(letter).ok_or_else(|| self.err("unknown family"))?;
        let rank = self.number()? as usize;
        let cartan_type = CartanType::new(family, rank).map_err(|e| self.err(&e.to_string()))?;
        if !twist_orders(cartan_type).contains(&twist) {
            return Err(self.err(&format!("{cartan_type} admits no twist of order {twist}")));
        }
        let mut field = 1;
        let mut bare = true;
        if self.starts("(q") {
            bare = false;
            self.pos += 2;
            if self.eat(b'^') {
                field = self.number()?;
                if field == 0 {
                    return Err(self.err("field exponent must be positive"));
                }
            }
            if !self.eat(b')') {
                return Err(self.err("expected `)` after field"));
            }
        }
        let power = self.power()?;
        Ok(Component {
            cartan_type,
            twist,
            field,
            power,
            bare,
        })
    }
}

impl FromStr for RationalType {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            input: s,
            b: s.as_bytes(),
            pos: 0,
        };
        if s.is_empty() {
            return Err(p.err("empty rational type"));
        }
        if s == "1" {
            return Ok(RationalType::trivial());
        }
        let items = p.items(false)?;
        if p.pos != s.len() {
            return Err(p.err("unbalanced `)`"));
        }
        Ok(RationalType { items })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> RationalType {
        s.parse().unwrap_or_else(|e| panic!("{e}"))
    }

    #[test]
    fn roundtrip_layouts() {
        for s in [
            "Phi1^6",
            "Phi1^2.A2(q)^2",
            "Phi1^2Phi3^2",
            "A2(q^2).2A2(q)",
            "Phi1^4.(A1(q)^3)'",
            "Phi1.E6(q).2",
            "2E6(q).2A2(q)",
            "Phi1.2A5(q).2A2(q)",
            "2A3(q)^2A1(q)",
            "Phi1^3Phi4.A2(q)A1(q)",
            "3D4(q)",
            "A1^3",
            "E8",
            "1",
        ] {
            assert_eq!(rt(s).to_string(), s);
        }
    }

    #[test]
    fn structure_of_groups_and_powers() {
        let t = rt("Phi1^4.(A1(q)^3)'");
        assert_eq!(t.components()[0].power, 3);
        assert_eq!(t.torus(), GenericOrder::phi(1, 4));
        assert_eq!(t.rank(), 7);
        let t = rt("2A3(q)^2A1(q)");
        assert_eq!(t.components().len(), 2);
        assert_eq!(t.components()[0].power, 2);
        assert_eq!(t.semisimple_label(), "A3A3A1");
        assert_eq!(rt("Phi1.E6(q).2").extension(), 2);
        assert_eq!(rt("A2(q^3)").semisimple_label(), "A2A2A2");
        assert_eq!(rt("Phi1^3Phi4.A2(q)A1(q)").rank(), 8);
    }

    #[test]
    fn same_structure_ignores_layout() {
        assert!(rt("Phi1^2Phi2.A1(q)").same_as(&rt("Phi2Phi1^2A1(q)")));
        assert!(!rt("A2(q)").same_as(&rt("2A2(q)")));
    }

    #[test]
    fn ennola_flips_outer_types_over_odd_fields() {
        assert_eq!(rt("Phi1^2.A2(q)^2").ennola().to_string(), "Phi2^2.2A2(q)^2");
        assert_eq!(rt("A2(q^2).2A2(q)").ennola().to_string(), "A2(q^2).A2(q)");
        assert_eq!(rt("A2(q^3)").ennola().to_string(), "2A2(q^3)");
        assert_eq!(
            rt("Phi1.D6(q)A1(q)").ennola().to_string(),
            "Phi2.D6(q)A1(q)"
        );
        assert_eq!(rt("E6").ennola().to_string(), "2E6");
        for s in [
            "Phi1^4.(A1(q)^3)'",
            "Phi4.2D6(q)",
            "3D4(q)",
            "Phi1^3Phi4.A2(q)A1(q)",
        ] {
            assert_eq!(rt(s).ennola().ennola(), rt(s));
        }
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "", "A0(q)", "2G2(q)", "A2(q", "Phi0", "X3", "A2(q)^0", "4A2(q)", "(A1(q)",
        ] {
            assert!(s.parse::<RationalType>().is_err(), "{s}");
        }
    }

    #[test]
    fn labels_sort_canonically() {
        let a1: CartanType = "A1".parse().unwrap();
        let e7: CartanType = "E7".parse().unwrap();
        assert_eq!(subsystem_label(vec![(a1, false), (e7, false)]), "E7A1");
        assert_eq!(subsystem_label(vec![(a1, true), (a1, false)]), "A1A1~");
        assert_eq!(subsystem_label(vec![]), "none");
    }
}
