//! Symbolic bundle expressions.

use std::fmt;

use serde::{Serialize, Serializer};

use super::facts::FactKind;
use crate::error::{Error, Result};
use crate::weights::{FlagType, Weight};

/// How an atom was obtained from other bundles, when that matters for inference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// Pullback along a surjective map from the current base onto a base of
    /// dimension `source_dim`.
    Pullback { source: Box<BundleExpr>, source_dim: usize },
    /// Holomorphic quotient of `parent`.
    Quotient { parent: Box<BundleExpr> },
    /// `det Q_{s_1} ⊗ ... ⊗ det Q_{s_{m-1}}` on the flag bundle of `parent`.
    FlagDeterminant { parent: Box<BundleExpr>, flag: FlagType },
}

/// A named bundle with declared positivity facts. Line bundles are atoms of rank 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub rank: usize,
    pub facts: Vec<FactKind>,
    pub origin: Option<Origin>,
}

impl Atom {
    pub fn new(name: &str, rank: usize, facts: Vec<FactKind>) -> Self {
        Atom { name: name.to_string(), rank, facts, origin: None }
    }

    pub fn line(name: &str, facts: Vec<FactKind>) -> Self {
        Self::new(name, 1, facts)
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = Some(origin);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleExpr {
    Atom(Atom),
    Dual(Box<BundleExpr>),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
    Det(Box<BundleExpr>),
    SymPow(Box<BundleExpr>, usize),
    WedgePow(Box<BundleExpr>, usize),
    Schur(Box<BundleExpr>, Weight),
    TensorPow(Box<BundleExpr>, usize),
    /// `e ⊗ (det e)^m`.
    DetTwist(Box<BundleExpr>, i64),
    /// `K_X ⊗ e`.
    CanonicalTwist(Box<BundleExpr>),
}

fn binom(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let mut acc: usize = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn overflow() -> Error {
    Error::InvalidInput("bundle rank overflows".into())
}

impl BundleExpr {
    pub fn atom(a: Atom) -> Self {
        BundleExpr::Atom(a)
    }

    pub fn dual(self) -> Self {
        BundleExpr::Dual(Box::new(self))
    }

    pub fn tensor(self, other: BundleExpr) -> Self {
        BundleExpr::Tensor(Box::new(self), Box::new(other))
    }

    pub fn det(self) -> Self {
        BundleExpr::Det(Box::new(self))
    }

    pub fn sym(self, p: usize) -> Self {
        BundleExpr::SymPow(Box::new(self), p)
    }

    pub fn wedge(self, q: usize) -> Self {
        BundleExpr::WedgePow(Box::new(self), q)
    }

    pub fn schur(self, a: Weight) -> Self {
        BundleExpr::Schur(Box::new(self), a)
    }

    pub fn pow(self, l: usize) -> Self {
        BundleExpr::TensorPow(Box::new(self), l)
    }

    pub fn det_twist(self, m: i64) -> Self {
        BundleExpr::DetTwist(Box::new(self), m)
    }

    pub fn canonical_twist(self) -> Self {
        BundleExpr::CanonicalTwist(Box::new(self))
    }

    /// Rank, checking that every constructor is well formed.
    pub fn rank(&self) -> Result<usize> {
        match self {
            BundleExpr::Atom(a) => {
                if a.rank == 0 {
                    return Err(Error::InvalidInput(format!("atom {} has rank 0", a.name)));
                }
                Ok(a.rank)
            }
            BundleExpr::Dual(e) | BundleExpr::DetTwist(e, _) | BundleExpr::CanonicalTwist(e) => e.rank(),
            BundleExpr::Tensor(a, b) => a.rank()?.checked_mul(b.rank()?).ok_or_else(overflow),
            BundleExpr::Det(e) => e.rank().map(|_| 1),
            BundleExpr::SymPow(e, p) => {
                let r = e.rank()?;
                binom(r + p - 1, *p).ok_or_else(overflow)
            }
            BundleExpr::WedgePow(e, q) => {
                let r = e.rank()?;
                if *q > r {
                    return Err(Error::InvalidInput(format!("wedge power {q} exceeds rank {r}")));
                }
                binom(r, *q).ok_or_else(overflow)
            }
            BundleExpr::Schur(e, a) => {
                let r = e.rank()?;
                if a.rank() != r || !a.is_dominant() {
                    return Err(Error::InvalidInput(format!(
                        "schur weight {:?} must be dominant of length {r}",
                        a.entries()
                    )));
                }
                let d = crate::bott::schur_dimension(a, r)?;
                usize::try_from(d).map_err(|_| overflow())
            }
            BundleExpr::TensorPow(e, l) => {
                let r = e.rank()?;
                r.checked_pow(*l as u32).ok_or_else(overflow)
            }
        }
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |a: &Weight| a.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            BundleExpr::Atom(a) => write!(f, "{}", a.name),
            BundleExpr::Dual(e) => write!(f, "dual({e})"),
            BundleExpr::Tensor(a, b) => {
                let wrap = |e: &BundleExpr| match e {
                    BundleExpr::CanonicalTwist(_) => format!("({e})"),
                    _ => e.to_string(),
                };
                write!(f, "{} * {}", wrap(a), wrap(b))
            }
            BundleExpr::Det(e) => write!(f, "det({e})"),
            BundleExpr::SymPow(e, p) => write!(f, "sym<{p}>({e})"),
            BundleExpr::WedgePow(e, q) => write!(f, "wedge<{q}>({e})"),
            BundleExpr::Schur(e, a) => write!(f, "schur<{}>({e})", list(a)),
            BundleExpr::TensorPow(e, l) => write!(f, "pow<{l}>({e})"),
            BundleExpr::DetTwist(e, m) => write!(f, "twist<{m}>({e})"),
            BundleExpr::CanonicalTwist(e) => write!(f, "K*{e}"),
        }
    }
}

impl Serialize for BundleExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One tensor factor after flattening products and reading determinant powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Factor<'a> {
    /// `(det of)^m`.
    Det { of: &'a BundleExpr, m: i64 },
    /// `of^{⊗l}`.
    Pow { of: &'a BundleExpr, l: usize },
    Other(&'a BundleExpr),
}

fn classify(e: &BundleExpr) -> Factor<'_> {
    match e {
        BundleExpr::Det(x) => Factor::Det { of: x, m: 1 },
        BundleExpr::Schur(x, a) if a.entries().iter().all(|&v| v == 1) && x.rank().ok() == Some(a.rank()) => {
            Factor::Det { of: x, m: 1 }
        }
        BundleExpr::TensorPow(y, l) => match classify(y) {
            Factor::Det { of, m } => Factor::Det { of, m: m * *l as i64 },
            _ => Factor::Pow { of: y, l: *l },
        },
        _ => Factor::Other(e),
    }
}

fn collect<'a>(e: &'a BundleExpr, out: &mut Vec<Factor<'a>>) {
    match e {
        BundleExpr::Tensor(a, b) => {
            collect(a, out);
            collect(b, out);
        }
        BundleExpr::DetTwist(x, m) => {
            collect(x, out);
            out.push(Factor::Det { of: x, m: *m });
        }
        _ => out.push(classify(e)),
    }
}

/// Flattened tensor factors; determinant powers of the same bundle are merged.
pub(crate) fn factors(e: &BundleExpr) -> Vec<Factor<'_>> {
    let mut raw = Vec::new();
    collect(e, &mut raw);
    let mut out: Vec<Factor> = Vec::new();
    for f in raw {
        if let Factor::Det { of, m } = f {
            if let Some(Factor::Det { m: m0, .. }) =
                out.iter_mut().find(|g| matches!(g, Factor::Det { of: o, .. } if *o == of))
            {
                *m0 += m;
                continue;
            }
        }
        out.push(f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(r: usize) -> BundleExpr {
        BundleExpr::atom(Atom::new("E", r, vec![]))
    }

    #[test]
    fn ranks_compose() {
        assert_eq!(e(3).tensor(e(3)).rank().unwrap(), 9);
        assert_eq!(e(3).det().rank().unwrap(), 1);
        assert_eq!(e(3).sym(2).rank().unwrap(), 6);
        assert_eq!(e(3).wedge(2).rank().unwrap(), 3);
        assert_eq!(e(3).schur(Weight(vec![2, 1, 0])).rank().unwrap(), 8);
        assert_eq!(e(2).pow(3).rank().unwrap(), 8);
        assert!(e(2).wedge(3).rank().is_err());
        assert!(e(2).schur(Weight(vec![0, 1])).rank().is_err());
        assert!(e(2).schur(Weight(vec![1, 0, 0])).rank().is_err());
    }

    #[test]
    fn factor_normal_form() {
        let x = e(2);
        let twisted = x.clone().det_twist(1);
        let product = x.clone().tensor(x.clone().det());
        let via_schur = x.clone().schur(Weight(vec![1, 1])).tensor(x.clone());
        let expect = vec![Factor::Other(&x), Factor::Det { of: &x, m: 1 }];
        assert_eq!(factors(&twisted), expect);
        assert_eq!(factors(&product), expect);
        assert_eq!(factors(&via_schur).len(), 2);
        let merged = x.clone().tensor(x.clone().det()).tensor(x.clone().det().pow(2));
        assert_eq!(factors(&merged)[1], Factor::Det { of: &x, m: 3 });
    }

    #[test]
    fn display_round_shape() {
        let x = e(2);
        let k = x.clone().tensor(x.clone().det()).canonical_twist();
        assert_eq!(k.to_string(), "K*E * det(E)");
        assert_eq!(x.clone().schur(Weight(vec![2, 0])).to_string(), "schur<2,0>(E)");
    }
}
