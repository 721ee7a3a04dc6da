//! Finite partial functions `h: Z -> A` and the cylinders `C(h)` they cut out.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::biseq::{parse_symbol, BiSeq, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CylinderError {
    /// Two maps disagree at a shared position, so their cylinders are disjoint.
    #[error("incompatible at position {position}: {left} vs {right}")]
    Incompatible {
        position: i64,
        left: Symbol,
        right: Symbol,
    },
    #[error("position {0} given twice")]
    DuplicatePosition(i64),
    #[error("cannot parse `{0}` as a finite map")]
    Parse(String),
}

/// A function with finite domain. The empty map describes the whole full shift.
///
/// Ordering is lexicographic over `(position, symbol)` pairs in ascending
/// position order, which is what deterministic tie-breaking relies on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinMap(BTreeMap<i64, Symbol>);

impl FinMap {
    pub fn empty() -> FinMap {
        FinMap::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<FinMap, CylinderError>
    where
        I: IntoIterator<Item = (i64, Symbol)>,
    {
        let mut map = BTreeMap::new();
        for (p, s) in pairs {
            if map.insert(p, s).is_some() {
                return Err(CylinderError::DuplicatePosition(p));
            }
        }
        Ok(FinMap(map))
    }

    /// `x` restricted to the given positions.
    pub fn observe<I: IntoIterator<Item = i64>>(x: &BiSeq, positions: I) -> FinMap {
        FinMap(positions.into_iter().map(|p| (p, x.symbol_at(p))).collect())
    }

    /// `x` restricted to `[a, b]`.
    pub fn window(x: &BiSeq, a: i64, b: i64) -> FinMap {
        FinMap::observe(x, a..=b)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, position: i64) -> Option<Symbol> {
        self.0.get(&position).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Symbol)> + '_ {
        self.0.iter().map(|(&p, &s)| (p, s))
    }

    pub fn domain(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.keys().copied()
    }

    /// Smallest interval containing the domain.
    pub fn hull(&self) -> Option<(i64, i64)> {
        Some((*self.0.keys().next()?, *self.0.keys().next_back()?))
    }

    pub fn contains(&self, x: &BiSeq) -> bool {
        self.iter().all(|(p, s)| x.symbol_at(p) == s)
    }

    /// Membership decided against a partially known point. `None` when an
    /// unknown position could still go either way.
    pub fn contains_partial(&self, lookup: &dyn Fn(i64) -> Option<Symbol>) -> Option<bool> {
        let mut undecided = false;
        for (p, s) in self.iter() {
            match lookup(p) {
                Some(v) if v != s => return Some(false),
                Some(_) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(true)
        }
    }

    /// The translate `h^[n]`: `dom + n`, same values. `C(h^[n]) = σ^{-n}(C(h))`.
    pub fn translate(&self, n: i64) -> FinMap {
        FinMap(self.0.iter().map(|(&p, &s)| (p + n, s)).collect())
    }

    /// `C(self ⊕ other) = C(self) ∩ C(other)`.
    pub fn join_with(&self, other: &FinMap) -> Result<FinMap, CylinderError> {
        let mut out = self.0.clone();
        for (p, s) in other.iter() {
            match out.insert(p, s) {
                Some(prev) if prev != s => {
                    return Err(CylinderError::Incompatible {
                        position: p,
                        left: prev,
                        right: s,
                    })
                }
                _ => {}
            }
        }
        Ok(FinMap(out))
    }

    /// Whether `self` extends `other` (so `C(self) ⊆ C(other)`).
    pub fn extends(&self, other: &FinMap) -> bool {
        other.iter().all(|(p, s)| self.get(p) == Some(s))
    }

    /// `C(self) ∩ C(other)` is empty in the full shift.
    pub fn disjoint_from(&self, other: &FinMap) -> bool {
        self.join_with(other).is_err()
    }
}

/// Joins a family of maps. The empty family yields the empty map.
pub fn join(hs: &[FinMap]) -> Result<FinMap, CylinderError> {
    hs.iter()
        .try_fold(FinMap::empty(), |acc, h| acc.join_with(h))
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .iter()
            .map(|(p, s)| format!("{p}:{s}"))
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{{{body}}}")
    }
}

impl FromStr for FinMap {
    type Err = CylinderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CylinderError::Parse(s.to_string());
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(bad)?;
        if body.trim().is_empty() {
            return Ok(FinMap::empty());
        }
        let pairs = body
            .split(',')
            .map(|entry| {
                let (p, v) = entry.split_once(':').ok_or_else(bad)?;
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let v = parse_symbol(v).map_err(|_| bad())?;
                Ok((p, v))
            })
            .collect::<Result<Vec<_>, CylinderError>>()?;
        FinMap::from_pairs(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biseq::Tail;

    fn fm(pairs: &[(i64, Symbol)]) -> FinMap {
        FinMap::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn empty_map_contains_everything() {
        let x = BiSeq::new(Tail::Constant(3), -2, vec![1, 9], Tail::arithmetic(0, 4));
        assert!(FinMap::empty().contains(&x));
        assert!(fm(&[(0, 0)]).contains(&BiSeq::constant(0)));
        assert!(!fm(&[(0, 1)]).contains(&BiSeq::constant(0)));
    }

    #[test]
    fn translate_examples() {
        let h = fm(&[(0, 3)]);
        assert_eq!(h.translate(0), h);
        assert_eq!(h.translate(2), fm(&[(2, 3)]));
    }

    #[test]
    fn join_examples() {
        let a = fm(&[(0, 1)]);
        assert_eq!(join(std::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(
            join(&[a.clone(), fm(&[(1, 2)])]).unwrap(),
            fm(&[(0, 1), (1, 2)])
        );
        assert_eq!(
            join(&[a, fm(&[(0, 2)])]),
            Err(CylinderError::Incompatible {
                position: 0,
                left: 1,
                right: 2
            })
        );
    }

    #[test]
    fn duplicate_positions_rejected() {
        assert_eq!(
            FinMap::from_pairs([(1, 0), (1, 0)]),
            Err(CylinderError::DuplicatePosition(1))
        );
    }

    #[test]
    fn partial_membership() {
        let h = fm(&[(0, 1), (2, 5)]);
        let known = |p: i64| if p == 0 { Some(1) } else { None };
        assert_eq!(h.contains_partial(&known), None);
        let wrong = |p: i64| if p == 0 { Some(7) } else { None };
        assert_eq!(h.contains_partial(&wrong), Some(false));
        let full = |p: i64| Some(if p == 0 { 1 } else { 5 });
        assert_eq!(h.contains_partial(&full), Some(true));
    }

    #[test]
    fn text_format() {
        let h = fm(&[(2, 3), (-1, 0)]);
        assert_eq!(h.to_string(), "{-1:0,2:3}");
        assert_eq!("{-1:0, 2:3}".parse::<FinMap>().unwrap(), h);
        assert_eq!(FinMap::empty().to_string(), "{}");
        assert_eq!("{}".parse::<FinMap>().unwrap(), FinMap::empty());
        assert!("{1:2,1:3}".parse::<FinMap>().is_err());
        assert!("1:2".parse::<FinMap>().is_err());
    }

    #[test]
    fn extension_and_hull() {
        let small = fm(&[(0, 0)]);
        let big = fm(&[(0, 0), (1, 4)]);
        assert!(big.extends(&small));
        assert!(!small.extends(&big));
        assert_eq!(big.hull(), Some((0, 1)));
        assert_eq!(FinMap::empty().hull(), None);
    }
}
