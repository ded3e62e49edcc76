//! Vanishing theorems as syntactic predicates over bundle expressions.

use serde::Serialize;

use super::expr::{factors, BundleExpr, Factor};
use super::facts::{infer_positivity, FactKind, FactSet};
use super::glpsd::check_gap_condition;
use crate::error::{Error, Result};
use crate::omega::exterior_weights;
use crate::weights::{expand_block_weight, flag_dimension, BlockWeight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Premise {
    pub statement: String,
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discharged_by: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    Vanishes { region: String },
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem_id: &'static str,
    pub citation: &'static str,
    pub hypothesis_trace: Vec<Premise>,
    pub conclusion: Conclusion,
    pub conjectural: bool,
}

impl TheoremReport {
    pub fn vanishes(&self) -> bool {
        matches!(self.conclusion, Conclusion::Vanishes { .. })
    }
}

#[derive(Debug, Clone, Default)]
pub struct QueryOptions {
    /// Include the conjectural `(k, s)` total-degree predicate.
    pub conjectural: bool,
    /// Flag type and block weight `a_s` for the flag-weight predicate.
    pub flag_weight: Option<BlockWeight>,
}

pub const NAKANO: &str = "nakano";
pub const GIGANTE_GIRBAU: &str = "gigante_girbau";
pub const GRIFFITHS_TOTAL_DEGREE: &str = "griffiths_total_degree";
pub const KS_TOP_DEGREE: &str = "ks_top_degree";
pub const DET_TWIST: &str = "det_twist";
pub const DUAL_DET_TWIST: &str = "dual_det_twist";
pub const K_AMPLE_TOTAL_DEGREE: &str = "k_ample_total_degree";
pub const SCHUR_DET_TWIST: &str = "schur_det_twist";
pub const TENSOR_POWER_DET_TWIST: &str = "tensor_power_det_twist";
pub const FLAG_WEIGHT_TOTAL_DEGREE: &str = "flag_weight_total_degree";
pub const KS_TOTAL_DEGREE_CONJECTURAL: &str = "ks_total_degree_conjectural";

struct Trace {
    premises: Vec<Premise>,
}

impl Trace {
    fn new() -> Self {
        Trace { premises: Vec::new() }
    }

    fn check(&mut self, statement: String, satisfied: bool, by: Option<String>) -> &mut Self {
        self.premises.push(Premise { statement, satisfied, discharged_by: if satisfied { by } else { None } });
        self
    }

    fn finish(self, id: &'static str, citation: &'static str, region: String, conjectural: bool) -> TheoremReport {
        let ok = self.premises.iter().all(|p| p.satisfied);
        TheoremReport {
            theorem_id: id,
            citation,
            hypothesis_trace: self.premises,
            conclusion: if ok { Conclusion::Vanishes { region } } else { Conclusion::NotApplicable },
            conjectural,
        }
    }
}

/// Group `H^{p,q}(X, e)` in the form the predicates match against: a leading
/// canonical twist at `p = 0` becomes `(n, q)`-forms with values in the rest.
struct Query<'a> {
    e: &'a BundleExpr,
    n: usize,
    p: usize,
    q: usize,
}

impl Query<'_> {
    fn ge(&self, lhs: usize, rhs: usize, text: &str) -> (String, bool) {
        (format!("{text}: {lhs} >= {rhs}"), lhs >= rhs)
    }

    fn gt(&self, lhs: usize, rhs: usize, text: &str) -> (String, bool) {
        (format!("{text}: {lhs} > {rhs}"), lhs > rhs)
    }

    fn top_degree(&self) -> (String, bool) {
        (format!("p = n: {} = {}", self.p, self.n), self.p == self.n)
    }
}

fn griffiths_premise(t: &mut Trace, f: &FactSet) -> Option<usize> {
    let k = f.min_griffiths_k();
    t.check(
        format!("{} is Griffiths k-positive", f.subject),
        k.is_some(),
        k.map(|k| f.cite(FactKind::GriffithsK { k })),
    );
    k
}

fn semipositive_premise(t: &mut Trace, b: Option<&FactSet>) {
    match b {
        None => {
            t.check("line factor is semipositive".into(), true, Some("no line factor (trivial bundle)".into()));
        }
        Some(f) => {
            let ok = f.contains(FactKind::SemipositiveLine);
            t.check(
                format!("{} is a semipositive line bundle", f.subject),
                ok,
                Some(f.cite(FactKind::SemipositiveLine)),
            );
        }
    }
}

fn ks_rank_premise(t: &mut Trace, f: &FactSet, q: &Query, r: usize) -> (Option<usize>, usize) {
    let s = (q.n + 1 - q.q).min(r);
    let k = f.min_ks_k(s);
    t.check(
        format!("{} is (k, s)-positive with s = min(n - q + 1, r) = {s}", f.subject),
        k.is_some(),
        k.map(|k| f.cite(FactKind::KsPositive { k, s })),
    );
    (k, s)
}

fn nakano(q: &Query, f: &FactSet) -> TheoremReport {
    let mut t = Trace::new();
    let ok = f.contains(FactKind::NakanoPositive);
    t.check(format!("{} is Nakano positive", f.subject), ok, Some(f.cite(FactKind::NakanoPositive)));
    let (s, b) = q.top_degree();
    t.check(s, b, None);
    let (s, b) = q.ge(q.q, 1, "q >= 1");
    t.check(s, b, None);
    t.finish(
        NAKANO,
        "Nakano vanishing: H^{n,q}(X, E) = 0 for q >= 1 when E is Nakano positive",
        format!("H^{{{},{}}} with p = n and q >= 1", q.p, q.q),
        false,
    )
}

fn gigante_girbau(q: &Query, f: &FactSet) -> TheoremReport {
    let mut t = Trace::new();
    let k = f.min_k_positive_line();
    t.check(
        format!("{} is a k-positive line bundle", f.subject),
        k.is_some(),
        k.map(|k| f.cite(FactKind::KPositiveLine { k })),
    );
    let k = k.unwrap_or(q.n);
    let (s, b) = q.gt(q.p + q.q, q.n + k, "p + q > n + k");
    t.check(s, b, None);
    t.finish(
        GIGANTE_GIRBAU,
        "Gigante-Girbau vanishing: H^{p,q}(X, B) = 0 for p + q > n + k when B is a k-positive line bundle",
        format!("p + q > n + k = {}", q.n + k),
        false,
    )
}

fn griffiths_total(q: &Query, f: &FactSet, r: usize) -> TheoremReport {
    let mut t = Trace::new();
    let k = griffiths_premise(&mut t, f).unwrap_or(q.n);
    let (s, b) = q.ge(q.p + q.q, q.n + k + r, "p + q >= n + k + r");
    t.check(s, b, None);
    t.finish(
        GRIFFITHS_TOTAL_DEGREE,
        "H^{p,q}(X, E) = 0 for p + q >= n + k + r when E is Griffiths k-positive of rank r",
        format!("p + q >= n + k + r = {}", q.n + k + r),
        false,
    )
}

fn ks_top(q: &Query, f: &FactSet, r: usize) -> TheoremReport {
    let mut t = Trace::new();
    let (s0, b0) = q.top_degree();
    t.check(s0, b0, None);
    let (k, s) = ks_rank_premise(&mut t, f, q, r);
    let k = k.unwrap_or(q.n);
    let (st, b) = q.gt(q.q, k, "q > k");
    t.check(st, b, None);
    t.finish(
        KS_TOP_DEGREE,
        "H^{n,q}(X, E) = 0 for q > k and s >= min(n - q + 1, r) when E is (k, s)-positive",
        format!("p = n, q > k = {k}, s = {s}"),
        false,
    )
}

fn det_twist(q: &Query, fx: &FactSet, rx: usize) -> TheoremReport {
    let mut t = Trace::new();
    let (s0, b0) = q.top_degree();
    t.check(s0, b0, None);
    t.check(format!("rank {rx} >= 2"), rx >= 2, None);
    let k = griffiths_premise(&mut t, fx).unwrap_or(q.n);
    let (s, b) = q.gt(q.q, k, "q > k");
    t.check(s, b, None);
    t.finish(
        DET_TWIST,
        "H^q(X, K_X ⊗ E ⊗ det E) = 0 for q > k when E is Griffiths k-positive of rank r >= 2",
        format!("p = n, q > k = {k}"),
        false,
    )
}

fn dual_det_twist(q: &Query, fx: &FactSet, rx: usize, m: i64) -> TheoremReport {
    let mut t = Trace::new();
    let (s0, b0) = q.top_degree();
    t.check(s0, b0, None);
    t.check(format!("rank {rx} >= 2"), rx >= 2, None);
    let k = griffiths_premise(&mut t, fx).unwrap_or(q.n);
    let (s, b) = q.gt(q.q, k, "q > k");
    t.check(s, b, None);
    let bound = (q.n + 1).saturating_sub(q.q).min(rx) as i64;
    t.check(format!("det exponent s >= min(n - q + 1, r): {m} >= {bound}"), m >= bound, None);
    t.finish(
        DUAL_DET_TWIST,
        "H^q(X, K_X ⊗ E^* ⊗ (det E)^s) = 0 for q > k and s >= min(n - q + 1, r) when E is Griffiths k-positive of rank r >= 2",
        format!("p = n, q > k = {k}, s = {m}"),
        false,
    )
}

fn k_ample_total(q: &Query, f: &FactSet, r: usize) -> TheoremReport {
    let mut t = Trace::new();
    let k = f.min_k_ample();
    t.check(format!("{} is k-ample", f.subject), k.is_some(), k.map(|k| f.cite(FactKind::KAmple { k })));
    let k = k.unwrap_or(q.n);
    let (s, b) = q.ge(q.p + q.q, q.n + r + k, "p + q >= n + r + k");
    t.check(s, b, None);
    t.finish(
        K_AMPLE_TOTAL_DEGREE,
        "H^{p,q}(X, E) = 0 for p + q >= n + r + k when E is k-ample",
        format!("p + q >= n + r + k = {}", q.n + r + k),
        false,
    )
}

fn schur_det(q: &Query, fx: &FactSet, a: &[i64], h_exp: i64, b: Option<&FactSet>) -> TheoremReport {
    let mut t = Trace::new();
    let r = a.len();
    let h = a.iter().filter(|&&v| v > 0).count();
    let shape = a.iter().all(|&v| v >= 0) && a[r - 1] == 0 && h >= 1 && h < r;
    t.check(
        format!("weight {a:?} has a_1 >= ... >= a_h > a_(h+1) = ... = a_r = 0 with 1 <= h <= r - 1"),
        shape,
        None,
    );
    t.check(format!("det exponent equals h: {h_exp} = {h}"), shape && h_exp == h as i64, None);
    let (s0, b0) = q.top_degree();
    t.check(s0, b0, None);
    let k = griffiths_premise(&mut t, fx).unwrap_or(q.n);
    semipositive_premise(&mut t, b);
    let (s, bq) = q.gt(q.q, k, "q > k");
    t.check(s, bq, None);
    t.finish(
        SCHUR_DET_TWIST,
        "H^{n,q}(X, Γ^a E ⊗ (det E)^h ⊗ B) = 0 for q > k when E is Griffiths k-positive, B is semipositive and a_1 >= ... >= a_h > a_(h+1) = ... = a_r = 0",
        format!("p = n, q > k = {k}"),
        false,
    )
}

fn tensor_power(q: &Query, fx: &FactSet, rx: usize, l: usize, m: i64, b: Option<&FactSet>) -> TheoremReport {
    let mut t = Trace::new();
    let k = griffiths_premise(&mut t, fx).unwrap_or(q.n);
    semipositive_premise(&mut t, b);
    let (s, bp) = q.gt(q.p + q.q, q.n + k, "p + q > n + k");
    t.check(s, bp, None);
    t.check(format!("l >= 1: {l} >= 1"), l >= 1, None);
    let bound = q.n as i64 - q.p as i64 + rx as i64 - 1;
    t.check(format!("m >= n - p + r - 1: {m} >= {bound}"), m >= bound, None);
    t.finish(
        TENSOR_POWER_DET_TWIST,
        "H^{p,q}(X, E^{⊗l} ⊗ (det E)^m ⊗ B) = 0 for p + q > n + k, l >= 1, m >= n - p + r - 1 when E is Griffiths k-positive and B is semipositive",
        format!("p + q > n + k = {}, l >= 1, m >= {bound}", q.n + k),
        false,
    )
}

fn flag_weight(q: &Query, fx: &FactSet, b_weight: &[i64], a_s: &BlockWeight, b: Option<&FactSet>) -> Result<TheoremReport> {
    let mut t = Trace::new();
    let s = a_s.flag();
    let n_s = flag_dimension(s);
    let k = griffiths_premise(&mut t, fx).unwrap_or(q.n);
    semipositive_premise(&mut t, b);
    let gap_ok = q.p <= n_s && check_gap_condition(a_s, q.p)?.ok;
    t.check(format!("a_s = {:?} satisfies the block gap condition in degree {}", a_s.entries(), q.p), gap_ok, None);
    let a = expand_block_weight(a_s);
    let u: Vec<i64> = b_weight.iter().zip(a.entries()).map(|(x, y)| x - y).collect();
    let member = q.p <= n_s && exterior_weights(s, q.p)?.terms.contains_key(&crate::weights::Weight(u.clone()));
    t.check(
        format!("u = {u:?} is a weight of the degree-{} exterior power of the flag cotangent space", q.p),
        member,
        None,
    );
    let (st, bp) = q.gt(q.p + q.q, q.n + k + n_s, "p + q > n + k + N_s");
    t.check(st, bp, None);
    Ok(t.finish(
        FLAG_WEIGHT_TOTAL_DEGREE,
        "H^q(X, Ω^p(Γ^{a+u} E ⊗ B)) = 0 for p + q > n + k + N_s when E is Griffiths k-positive, B is semipositive, a_s satisfies the block gap condition and u is a weight of the p-th exterior power of the flag cotangent space",
        format!("p + q > n + k + N_s = {}", q.n + k + n_s),
        false,
    ))
}

fn ks_total_conjectural(q: &Query, f: &FactSet, r: usize) -> TheoremReport {
    let mut t = Trace::new();
    let (k, s) = ks_rank_premise(&mut t, f, q, r);
    let k = k.unwrap_or(q.n);
    let (st, b) = q.gt(q.p + q.q, q.n + k, "p + q > n + k");
    t.check(st, b, None);
    t.finish(
        KS_TOTAL_DEGREE_CONJECTURAL,
        "conjectural: H^{p,q}(X, E) = 0 for p + q > n + k and s >= min(n - q + 1, r) when E is (k, s)-positive",
        format!("p + q > n + k = {}, s = {s}", q.n + k),
        true,
    )
}

/// Splits factors into the core bundle pattern and an optional extra line factor.
fn split_line<'a>(rest: Vec<Factor<'a>>) -> Option<Option<&'a BundleExpr>> {
    match rest.as_slice() {
        [] => Some(None),
        [Factor::Other(b)] if b.rank().ok() == Some(1) => Some(Some(*b)),
        _ => None,
    }
}

/// Every vanishing predicate whose shape matches `H^{p,q}(X, e)`, with the
/// premises checked against the inferred positivity facts.
pub fn query_vanishing(e: &BundleExpr, n: usize, p: usize, q: usize, opts: &QueryOptions) -> Result<Vec<TheoremReport>> {
    if p > n || q > n {
        return Err(Error::InvalidInput(format!("need 0 <= p, q <= n = {n}, got ({p}, {q})")));
    }
    let query = match e {
        BundleExpr::CanonicalTwist(x) if p == 0 => Query { e: x, n, p: n, q },
        _ => Query { e, n, p, q },
    };
    let e = query.e;
    let r = e.rank()?;
    let f = infer_positivity(e, n)?;
    let mut out = vec![nakano(&query, &f)];
    if r == 1 {
        out.push(gigante_girbau(&query, &f));
    }
    out.push(griffiths_total(&query, &f, r));
    out.push(ks_top(&query, &f, r));

    let fs = factors(e);
    let dets: Vec<(usize, &BundleExpr, i64)> = fs
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match g {
            Factor::Det { of, m } => Some((i, *of, *m)),
            _ => None,
        })
        .collect();
    if fs.len() == 2 {
        if let [(i, of, m)] = dets.as_slice() {
            if let Factor::Other(core) = fs[1 - i] {
                let rx = of.rank()?;
                if core == *of && *m == 1 {
                    out.push(det_twist(&query, &infer_positivity(of, n)?, rx));
                }
                if let BundleExpr::Dual(inner) = core {
                    if **inner == **of {
                        out.push(dual_det_twist(&query, &infer_positivity(of, n)?, rx, *m));
                    }
                }
            }
        }
    }

    out.push(k_ample_total(&query, &f, r));

    if let [(i, of, m)] = dets.as_slice() {
        let rest: Vec<Factor> = fs.iter().enumerate().filter(|(j, _)| j != i).map(|(_, g)| *g).collect();
        // Core factor: Schur(of, a), of^{⊗l} or of itself.
        for (ci, core) in rest.iter().enumerate() {
            let others: Vec<Factor> = rest.iter().enumerate().filter(|(j, _)| *j != ci).map(|(_, g)| *g).collect();
            let Some(line) = split_line(others) else { continue };
            let fb = line.map(|b| infer_positivity(b, n)).transpose()?;
            match core {
                Factor::Other(BundleExpr::Schur(x, a)) if **x == **of => {
                    out.push(schur_det(&query, &infer_positivity(of, n)?, a.entries(), *m, fb.as_ref()));
                }
                Factor::Pow { of: x, l } if *x == *of => {
                    out.push(tensor_power(&query, &infer_positivity(of, n)?, of.rank()?, *l, *m, fb.as_ref()));
                }
                Factor::Other(x) if *x == *of => {
                    out.push(tensor_power(&query, &infer_positivity(of, n)?, of.rank()?, 1, *m, fb.as_ref()));
                }
                _ => continue,
            }
            break;
        }
    }

    if let Some(a_s) = &opts.flag_weight {
        if dets.is_empty() {
            for (ci, core) in fs.iter().enumerate() {
                let Factor::Other(BundleExpr::Schur(x, bw)) = core else { continue };
                if x.rank()? != a_s.flag().rank() {
                    continue;
                }
                let others: Vec<Factor> = fs.iter().enumerate().filter(|(j, _)| *j != ci).map(|(_, g)| *g).collect();
                let Some(line) = split_line(others) else { continue };
                let fb = line.map(|b| infer_positivity(b, n)).transpose()?;
                out.push(flag_weight(&query, &infer_positivity(x, n)?, bw.entries(), a_s, fb.as_ref())?);
                break;
            }
        }
    }

    if opts.conjectural {
        out.push(ks_total_conjectural(&query, &f, r));
    }
    Ok(out)
}
