//! Positivity facts and their propagation through bundle constructions.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::expr::{factors, Atom, BundleExpr, Factor, Origin};
use crate::error::{Error, Result};
use crate::weights::{flag_dimension, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactKind {
    KsPositive { k: usize, s: usize },
    GriffithsK { k: usize },
    NakanoPositive,
    /// Semipositive with at least `n - k` positive eigenvalues; for a bundle of
    /// higher rank, the statement about its tautological line bundle.
    KPositiveLine { k: usize },
    KAmple { k: usize },
    SemipositiveLine,
    AmpleLine,
}

impl fmt::Display for FactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactKind::KsPositive { k, s } => write!(f, "ks_positive({k}, {s})"),
            FactKind::GriffithsK { k } => write!(f, "griffiths_k({k})"),
            FactKind::NakanoPositive => write!(f, "nakano_positive"),
            FactKind::KPositiveLine { k } => write!(f, "k_positive_line({k})"),
            FactKind::KAmple { k } => write!(f, "k_ample({k})"),
            FactKind::SemipositiveLine => write!(f, "semipositive_line"),
            FactKind::AmpleLine => write!(f, "ample_line"),
        }
    }
}

/// Rule that produced a fact, with the facts it consumed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub rule: &'static str,
    pub premises: Vec<String>,
}

/// Facts about one expression, closed under the lattice and definitional rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactSet {
    pub subject: String,
    facts: BTreeMap<FactKind, Derivation>,
}

impl FactSet {
    fn new(subject: String) -> Self {
        FactSet { subject, facts: BTreeMap::new() }
    }

    fn add(&mut self, kind: FactKind, rule: &'static str, premises: Vec<String>) -> bool {
        if self.facts.contains_key(&kind) {
            return false;
        }
        self.facts.insert(kind, Derivation { rule, premises });
        true
    }

    pub fn contains(&self, kind: FactKind) -> bool {
        self.facts.contains_key(&kind)
    }

    pub fn derivation(&self, kind: FactKind) -> Option<&Derivation> {
        self.facts.get(&kind)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FactKind, &Derivation)> {
        self.facts.iter()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// `"subject: fact"`, the form used in traces.
    pub fn cite(&self, kind: FactKind) -> String {
        format!("{}: {kind}", self.subject)
    }

    pub fn min_griffiths_k(&self) -> Option<usize> {
        self.facts.keys().filter_map(|f| match f {
            FactKind::GriffithsK { k } => Some(*k),
            _ => None,
        }).min()
    }

    pub fn min_k_positive_line(&self) -> Option<usize> {
        self.facts.keys().filter_map(|f| match f {
            FactKind::KPositiveLine { k } => Some(*k),
            _ => None,
        }).min()
    }

    pub fn min_k_ample(&self) -> Option<usize> {
        self.facts.keys().filter_map(|f| match f {
            FactKind::KAmple { k } => Some(*k),
            _ => None,
        }).min()
    }

    /// Smallest `k` with `ks_positive(k, s)`.
    pub fn min_ks_k(&self, s: usize) -> Option<usize> {
        self.facts.keys().filter_map(|f| match f {
            FactKind::KsPositive { k, s: t } if *t == s => Some(*k),
            _ => None,
        }).min()
    }

    fn ks_facts(&self) -> Vec<(usize, usize)> {
        self.facts.keys().filter_map(|f| match f {
            FactKind::KsPositive { k, s } => Some((*k, *s)),
            _ => None,
        }).collect()
    }

    fn griffiths(&self) -> Vec<usize> {
        self.facts.keys().filter_map(|f| match f {
            FactKind::GriffithsK { k } => Some(*k),
            _ => None,
        }).collect()
    }

    /// Adds `kind` derived from the single fact `from`, citing it only when new.
    fn derive(&mut self, kind: FactKind, rule: &'static str, from: FactKind) {
        if !self.contains(kind) {
            let by = vec![self.cite(from)];
            self.add(kind, rule, by);
        }
    }

    /// Applies the lattice, definitional and line rules until nothing changes.
    fn saturate(&mut self, n: usize, r: usize) {
        let mut pending: Vec<FactKind> = self.facts.keys().copied().collect();
        while let Some(kind) = pending.pop() {
            let mut next = Vec::new();
            match kind {
                FactKind::KsPositive { k, s } => {
                    if k < n {
                        next.push((FactKind::KsPositive { k: k + 1, s }, "lattice"));
                    }
                    if s >= 2 {
                        next.push((FactKind::KsPositive { k, s: s - 1 }, "lattice"));
                    }
                    if s == 1 {
                        next.push((FactKind::GriffithsK { k }, "definition"));
                    }
                    if k == 0 && s >= n.min(r) {
                        next.push((FactKind::NakanoPositive, "definition"));
                    }
                }
                FactKind::GriffithsK { k } => {
                    next.push((FactKind::KsPositive { k, s: 1 }, "definition"));
                    if r == 1 {
                        next.push((FactKind::KPositiveLine { k }, "line_equivalence"));
                    }
                }
                FactKind::NakanoPositive => next.push((FactKind::KsPositive { k: 0, s: r }, "definition")),
                FactKind::KPositiveLine { k } => {
                    if r == 1 {
                        next.push((FactKind::GriffithsK { k }, "line_equivalence"));
                        next.push((FactKind::SemipositiveLine, "definition"));
                    }
                }
                FactKind::KAmple { k } => {
                    next.push((FactKind::KPositiveLine { k }, "k_ample"));
                    if k == 0 && r == 1 {
                        next.push((FactKind::AmpleLine, "definition"));
                    }
                }
                FactKind::AmpleLine => next.push((FactKind::KAmple { k: 0 }, "definition")),
                FactKind::SemipositiveLine => next.push((FactKind::KPositiveLine { k: n }, "definition")),
            }
            for (new, rule) in next {
                if !self.contains(new) {
                    self.derive(new, rule, kind);
                    pending.push(new);
                }
            }
        }
    }
}

impl Serialize for FactSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Item<'a> {
            fact: &'a FactKind,
            rule: &'static str,
            premises: &'a [String],
        }
        let mut seq = s.serialize_seq(Some(self.facts.len()))?;
        for (fact, d) in &self.facts {
            seq.serialize_element(&Item { fact, rule: d.rule, premises: &d.premises })?;
        }
        seq.end()
    }
}

fn check_declared(a: &Atom) -> Result<()> {
    for f in &a.facts {
        let line_only = matches!(
            f,
            FactKind::SemipositiveLine | FactKind::AmpleLine | FactKind::KPositiveLine { .. }
        );
        if line_only && a.rank != 1 {
            return Err(Error::InvalidInput(format!("{f} declared on {} of rank {}", a.name, a.rank)));
        }
        if let FactKind::KsPositive { s, .. } = f {
            if *s < 1 || *s > a.rank {
                return Err(Error::InvalidInput(format!("{f} needs 1 <= s <= rank {}", a.rank)));
            }
        }
    }
    Ok(())
}

fn seed_atom(a: &Atom, n: usize, set: &mut FactSet) -> Result<()> {
    check_declared(a)?;
    for f in &a.facts {
        set.add(*f, "declared", Vec::new());
    }
    match &a.origin {
        None => {}
        Some(Origin::Pullback { source, source_dim }) => {
            if n < *source_dim {
                return Err(Error::Precondition(format!(
                    "pullback from dimension {n} onto dimension {source_dim} cannot be surjective"
                )));
            }
            if source.rank()? != a.rank {
                return Err(Error::InvalidInput(format!("pullback {} must keep the rank", a.name)));
            }
            let src = infer_positivity(source, *source_dim)?;
            for (k, s) in src.ks_facts() {
                let kind = FactKind::KsPositive { k: k + n - source_dim, s };
                set.add(kind, "pullback", vec![src.cite(FactKind::KsPositive { k, s })]);
            }
        }
        Some(Origin::Quotient { parent }) => {
            if parent.rank()? < a.rank {
                return Err(Error::InvalidInput(format!("quotient {} has larger rank than its parent", a.name)));
            }
            let par = infer_positivity(parent, n)?;
            for k in par.griffiths() {
                set.add(FactKind::GriffithsK { k }, "quotient", vec![par.cite(FactKind::GriffithsK { k })]);
            }
        }
        Some(Origin::FlagDeterminant { parent, flag }) => {
            if a.rank != 1 || flag.rank() != parent.rank()? {
                return Err(Error::InvalidInput(format!(
                    "flag determinant {} must be a line over a flag of the parent's rank",
                    a.name
                )));
            }
            let fiber = flag_dimension(flag);
            if n <= fiber {
                return Err(Error::Precondition(format!(
                    "flag bundle dimension {n} must exceed the fiber dimension {fiber}"
                )));
            }
            let par = infer_positivity(parent, n - fiber)?;
            for k in par.griffiths() {
                set.add(FactKind::KPositiveLine { k }, "flag_determinant", vec![par.cite(FactKind::GriffithsK { k })]);
            }
        }
    }
    Ok(())
}

fn tensor_rule(fa: &FactSet, fb: &FactSet, r: usize, set: &mut FactSet) {
    for (a, p) in fa.ks_facts() {
        for (b, q) in fb.ks_facts() {
            let kind = FactKind::KsPositive { k: a.max(b), s: p.min(q).min(r) };
            if set.contains(kind) {
                continue;
            }
            set.add(
                kind,
                "tensor_product",
                vec![fa.cite(FactKind::KsPositive { k: a, s: p }), fb.cite(FactKind::KsPositive { k: b, s: q })],
            );
        }
    }
}

fn schur_rule(fx: &FactSet, r: usize, set: &mut FactSet) {
    for (k, s) in fx.ks_facts() {
        let kind = FactKind::KsPositive { k, s: s.min(r) };
        if !set.contains(kind) {
            set.add(kind, "schur_functor", vec![fx.cite(FactKind::KsPositive { k, s })]);
        }
    }
}

/// Twists `x ⊗ det x` and `x^* ⊗ (det x)^s` read off the flattened factors.
fn twist_rules(e: &BundleExpr, n: usize, set: &mut FactSet) -> Result<()> {
    let fs = factors(e);
    if fs.len() != 2 {
        return Ok(());
    }
    let (core, det) = match (fs[0], fs[1]) {
        (Factor::Other(c), Factor::Det { of, m }) | (Factor::Det { of, m }, Factor::Other(c)) => (c, (of, m)),
        _ => return Ok(()),
    };
    let (of, m) = det;
    if core == of && m == 1 {
        let fx = infer_positivity(of, n)?;
        let rx = of.rank()?;
        for k in fx.griffiths() {
            for s in 1..=rx.min(n) {
                set.add(FactKind::KsPositive { k, s }, "det_twist", vec![fx.cite(FactKind::GriffithsK { k })]);
            }
        }
    }
    if let BundleExpr::Dual(inner) = core {
        let rx = of.rank()?;
        if **inner == *of && rx >= 2 && m >= 1 && (m as usize) <= rx {
            let fx = infer_positivity(of, n)?;
            for k in fx.griffiths() {
                set.add(
                    FactKind::KsPositive { k, s: m as usize },
                    "dual_det_twist",
                    vec![fx.cite(FactKind::GriffithsK { k })],
                );
            }
        }
    }
    Ok(())
}

/// Least fact set containing the declared facts and closed under the
/// propagation rules; every fact records the rule and premises that produced it.
pub fn infer_positivity(e: &BundleExpr, n: usize) -> Result<FactSet> {
    if n == 0 {
        return Err(Error::InvalidInput("base dimension must be positive".into()));
    }
    let r = e.rank()?;
    let mut set = FactSet::new(e.to_string());
    match e {
        BundleExpr::Atom(a) => seed_atom(a, n, &mut set)?,
        BundleExpr::Tensor(a, b) => {
            let fa = infer_positivity(a, n)?;
            let fb = infer_positivity(b, n)?;
            tensor_rule(&fa, &fb, r, &mut set);
        }
        BundleExpr::Det(x) => schur_rule(&infer_positivity(x, n)?, r, &mut set),
        BundleExpr::SymPow(x, p) | BundleExpr::WedgePow(x, p) | BundleExpr::TensorPow(x, p) => {
            if *p >= 1 {
                schur_rule(&infer_positivity(x, n)?, r, &mut set);
            }
        }
        BundleExpr::Schur(x, a) => {
            let nonneg = a.entries().iter().all(|&v| v >= 0);
            let nonzero = a.entries().iter().any(|&v| v > 0);
            if nonneg && nonzero {
                schur_rule(&infer_positivity(x, n)?, r, &mut set);
            }
        }
        BundleExpr::DetTwist(x, m) => {
            if *m == 0 {
                let fx = infer_positivity(x, n)?;
                for (kind, _) in fx.iter() {
                    set.add(*kind, "definition", vec![fx.cite(*kind)]);
                }
            } else if *m >= 1 {
                let rx = x.rank()?;
                let det_pow = (**x).clone().schur(Weight(vec![*m; rx]));
                let fx = infer_positivity(x, n)?;
                let fd = infer_positivity(&det_pow, n)?;
                tensor_rule(&fx, &fd, r, &mut set);
            }
        }
        BundleExpr::Dual(_) | BundleExpr::CanonicalTwist(_) => {}
    }
    twist_rules(e, n, &mut set)?;
    set.saturate(n, r);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn griffiths(r: usize, k: usize) -> BundleExpr {
        BundleExpr::atom(Atom::new("E", r, vec![FactKind::GriffithsK { k }]))
    }

    #[test]
    fn tensor_of_griffiths() {
        let e = griffiths(2, 1);
        let f = infer_positivity(&e.clone().tensor(e), 3).unwrap();
        assert!(f.contains(FactKind::KsPositive { k: 1, s: 1 }));
        assert!(f.contains(FactKind::GriffithsK { k: 1 }));
        assert!(!f.contains(FactKind::KsPositive { k: 0, s: 1 }));
        assert_eq!(f.derivation(FactKind::KsPositive { k: 1, s: 1 }).unwrap().rule, "tensor_product");
    }

    #[test]
    fn k_ample_line() {
        let b = BundleExpr::atom(Atom::line("B", vec![FactKind::KAmple { k: 2 }]));
        let f = infer_positivity(&b, 4).unwrap();
        assert!(f.contains(FactKind::KPositiveLine { k: 2 }));
        assert!(f.contains(FactKind::GriffithsK { k: 2 }));
        assert_eq!(f.derivation(FactKind::KPositiveLine { k: 2 }).unwrap().rule, "k_ample");
        assert!(!f.contains(FactKind::GriffithsK { k: 1 }));
    }

    #[test]
    fn lattice_closure() {
        let e = BundleExpr::atom(Atom::new("E", 3, vec![FactKind::KsPositive { k: 0, s: 3 }]));
        let f = infer_positivity(&e, 4).unwrap();
        for k in 0..=4 {
            for s in 1..=3 {
                assert!(f.contains(FactKind::KsPositive { k, s }), "({k}, {s})");
            }
        }
        assert!(f.contains(FactKind::NakanoPositive));
    }

    #[test]
    fn closure_is_fixed_point() {
        let e = griffiths(3, 1);
        let exprs = [
            e.clone(),
            e.clone().det_twist(1),
            e.clone().dual().tensor(e.clone().det().pow(2)),
            e.clone().sym(2).tensor(e.clone().wedge(2)),
        ];
        for x in exprs {
            let f = infer_positivity(&x, 4).unwrap();
            let mut again = f.clone();
            again.saturate(4, x.rank().unwrap());
            assert_eq!(f, again);
        }
    }

    #[test]
    fn twist_rules_fire() {
        let e = griffiths(3, 1);
        let f = infer_positivity(&e.clone().det_twist(1), 2).unwrap();
        assert!(f.contains(FactKind::KsPositive { k: 1, s: 2 }));
        assert!(!f.contains(FactKind::KsPositive { k: 1, s: 3 }));
        let g = infer_positivity(&e.clone().dual().tensor(e.clone().det().pow(3)), 4).unwrap();
        assert_eq!(g.derivation(FactKind::KsPositive { k: 1, s: 3 }).unwrap().rule, "dual_det_twist");
        let plain_dual = infer_positivity(&e.dual(), 4).unwrap();
        assert!(plain_dual.is_empty());
    }

    #[test]
    fn origins() {
        let e = griffiths(2, 1);
        let pulled = BundleExpr::atom(
            Atom::new("F", 2, vec![]).with_origin(Origin::Pullback { source: Box::new(e.clone()), source_dim: 3 }),
        );
        let f = infer_positivity(&pulled, 5).unwrap();
        assert_eq!(f.min_griffiths_k(), Some(3));
        assert!(infer_positivity(&pulled, 2).is_err());

        let q = BundleExpr::atom(Atom::new("Q", 1, vec![]).with_origin(Origin::Quotient { parent: Box::new(e.clone()) }));
        let f = infer_positivity(&q, 3).unwrap();
        assert_eq!(f.min_k_positive_line(), Some(1));

        let flag = crate::weights::FlagType::complete(2).unwrap();
        let d = BundleExpr::atom(
            Atom::line("L", vec![]).with_origin(Origin::FlagDeterminant { parent: Box::new(e), flag }),
        );
        let f = infer_positivity(&d, 4).unwrap();
        assert_eq!(f.min_k_positive_line(), Some(1));
    }

    #[test]
    fn declared_line_facts_need_rank_one() {
        let bad = BundleExpr::atom(Atom::new("E", 2, vec![FactKind::SemipositiveLine]));
        assert!(infer_positivity(&bad, 2).is_err());
    }
}
