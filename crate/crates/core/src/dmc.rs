//! Exact evaluation of the achievable rate-equivocation points and the
//! outer bound on finite-alphabet relay-eavesdropper channels, for supplied
//! input designs, plus brute-force maximization over rational-grid input
//! simplices.
//!
//! Every evaluator assembles the full joint distribution over
//! (u?, v1, v2, x1, x2, y, y1, y2) and reads the rate expressions off the
//! mutual-information kernels, so the computed points are exact up to
//! floating-point rounding.

use crate::channel::{is_reversely_degraded, RelayDmc};
use crate::error::{Error, Result};
use crate::info::JointPmf;
use crate::optim::{simplex_grid, simplex_grid_len};
use crate::scalar::Scalar;
use rayon::prelude::*;

fn validate_pmf<T: Scalar>(p: &[T], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Validation(format!("{what}: empty pmf")));
    }
    let mut sum = T::zero();
    for &v in p {
        if !v.is_finite() || v < T::zero() {
            return Err(Error::Validation(format!("{what}: invalid entry {v}")));
        }
        sum += v;
    }
    if (sum - T::one()).abs() > T::pmf_sum_tol() {
        return Err(Error::Validation(format!("{what}: sums to {sum}, expected 1")));
    }
    Ok(())
}

/// Row-stochastic conditional pmf: `rows[i * n_out + j] = p(j | i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondPmf<T> {
    n_in: usize,
    n_out: usize,
    rows: Vec<T>,
}

impl<T: Scalar> CondPmf<T> {
    pub fn new(n_in: usize, n_out: usize, rows: Vec<T>) -> Result<Self> {
        if n_in == 0 || n_out == 0 {
            return Err(Error::Validation("conditional pmf needs non-empty alphabets".into()));
        }
        if rows.len() != n_in * n_out {
            return Err(Error::Validation(format!(
                "conditional pmf has {} entries, expected {}",
                rows.len(),
                n_in * n_out
            )));
        }
        for i in 0..n_in {
            validate_pmf(&rows[i * n_out..(i + 1) * n_out], &format!("row {i}"))?;
        }
        Ok(Self { n_in, n_out, rows })
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![T::zero(); n * n];
        for i in 0..n {
            rows[i * n + i] = T::one();
        }
        Self { n_in: n, n_out: n, rows }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    #[inline]
    pub fn prob(&self, i: usize, j: usize) -> T {
        self.rows[i * self.n_out + j]
    }
}

/// Distribution of the auxiliary inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceLaw<T> {
    /// Independent p(v1) p(v2) (the NF / deaf-helper factorization).
    Product { pv1: Vec<T>, pv2: Vec<T> },
    /// Correlated p(v1, v2), row-major over (v1, v2).
    Joint { pv: Vec<T>, nv1: usize, nv2: usize },
    /// p(u, v1, v2) with the time-sharing auxiliary, row-major (u, v1, v2).
    Aux { puv: Vec<T>, nu: usize, nv1: usize, nv2: usize },
}

impl<T: Scalar> SourceLaw<T> {
    fn dims(&self) -> (usize, usize, usize) {
        match self {
            SourceLaw::Product { pv1, pv2 } => (1, pv1.len(), pv2.len()),
            SourceLaw::Joint { nv1, nv2, .. } => (1, *nv1, *nv2),
            SourceLaw::Aux { nu, nv1, nv2, .. } => (*nu, *nv1, *nv2),
        }
    }

    fn prob(&self, u: usize, v1: usize, v2: usize) -> T {
        match self {
            SourceLaw::Product { pv1, pv2 } => pv1[v1] * pv2[v2],
            SourceLaw::Joint { pv, nv2, .. } => pv[v1 * nv2 + v2],
            SourceLaw::Aux { puv, nv1, nv2, .. } => puv[(u * nv1 + v1) * nv2 + v2],
        }
    }
}

/// Channel prefix p(x1, x2 | v1, v2).
#[derive(Debug, Clone, PartialEq)]
pub enum Prefix<T> {
    /// x1 = v1, x2 = v2.
    Identity,
    /// p(x1|v1) p(x2|v2) — the factorization the NF and deaf-helper
    /// theorems require.
    Factored { px1: CondPmf<T>, px2: CondPmf<T> },
    /// Arbitrary p(x1, x2 | v1, v2), row-major over ((v1, v2), (x1, x2)).
    General { rows: CondPmf<T>, nv1: usize, nv2: usize, nx1: usize, nx2: usize },
}

impl<T: Scalar> Prefix<T> {
    fn output_dims(&self, nv1: usize, nv2: usize) -> (usize, usize) {
        match self {
            Prefix::Identity => (nv1, nv2),
            Prefix::Factored { px1, px2 } => (px1.n_out(), px2.n_out()),
            Prefix::General { nx1, nx2, .. } => (*nx1, *nx2),
        }
    }

    fn prob(&self, v1: usize, v2: usize, x1: usize, x2: usize) -> T {
        match self {
            Prefix::Identity => {
                if v1 == x1 && v2 == x2 {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Prefix::Factored { px1, px2 } => px1.prob(v1, x1) * px2.prob(v2, x2),
            Prefix::General { rows, nv2, nx2, .. } => {
                rows.prob(v1 * nv2 + v2, x1 * nx2 + x2)
            }
        }
    }

    fn is_factored(&self) -> bool {
        matches!(self, Prefix::Identity | Prefix::Factored { .. })
    }
}

/// Input design: auxiliary-variable law plus optional channel prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDesign<T> {
    law: SourceLaw<T>,
    prefix: Prefix<T>,
}

impl<T: Scalar> InputDesign<T> {
    pub fn product(pv1: Vec<T>, pv2: Vec<T>) -> Result<Self> {
        validate_pmf(&pv1, "pv1")?;
        validate_pmf(&pv2, "pv2")?;
        Ok(Self { law: SourceLaw::Product { pv1, pv2 }, prefix: Prefix::Identity })
    }

    pub fn joint(pv: Vec<T>, nv1: usize, nv2: usize) -> Result<Self> {
        if pv.len() != nv1 * nv2 {
            return Err(Error::Validation("joint law size mismatch".into()));
        }
        validate_pmf(&pv, "joint_pv")?;
        Ok(Self { law: SourceLaw::Joint { pv, nv1, nv2 }, prefix: Prefix::Identity })
    }

    pub fn with_aux(puv: Vec<T>, nu: usize, nv1: usize, nv2: usize) -> Result<Self> {
        if puv.len() != nu * nv1 * nv2 {
            return Err(Error::Validation("auxiliary law size mismatch".into()));
        }
        validate_pmf(&puv, "joint_puv")?;
        Ok(Self { law: SourceLaw::Aux { puv, nu, nv1, nv2 }, prefix: Prefix::Identity })
    }

    pub fn with_prefix(mut self, prefix: Prefix<T>) -> Result<Self> {
        let (_, nv1, nv2) = self.law.dims();
        match &prefix {
            Prefix::Identity => {}
            Prefix::Factored { px1, px2 } => {
                if px1.n_in() != nv1 || px2.n_in() != nv2 {
                    return Err(Error::Validation("prefix input alphabets mismatch the law".into()));
                }
            }
            Prefix::General { rows, nv1: pn1, nv2: pn2, nx1, nx2 } => {
                if *pn1 != nv1 || *pn2 != nv2 {
                    return Err(Error::Validation("prefix input alphabets mismatch the law".into()));
                }
                if rows.n_in() != pn1 * pn2 || rows.n_out() != nx1 * nx2 {
                    return Err(Error::Validation("prefix tensor shape mismatch".into()));
                }
            }
        }
        self.prefix = prefix;
        Ok(self)
    }

    pub fn law(&self) -> &SourceLaw<T> {
        &self.law
    }

    pub fn prefix(&self) -> &Prefix<T> {
        &self.prefix
    }

    fn has_aux(&self) -> bool {
        matches!(self.law, SourceLaw::Aux { .. })
    }

    fn is_product(&self) -> bool {
        matches!(self.law, SourceLaw::Product { .. })
    }
}

/// Full joint over (u?, v1, v2, x1, x2, y, y1, y2).
fn full_joint<T: Scalar>(c: &RelayDmc<T>, d: &InputDesign<T>) -> Result<JointPmf<T>> {
    let (nu, nv1, nv2) = d.law.dims();
    let (nx1, nx2) = d.prefix.output_dims(nv1, nv2);
    if nx1 != c.nx1 || nx2 != c.nx2 {
        return Err(Error::Validation(format!(
            "design drives ({nx1},{nx2}) channel inputs, channel expects ({},{})",
            c.nx1, c.nx2
        )));
    }
    let mut dims = Vec::new();
    if nu > 1 || d.has_aux() {
        dims.push(("u".to_string(), nu));
    }
    dims.extend([
        ("v1".to_string(), nv1),
        ("v2".to_string(), nv2),
        ("x1".to_string(), nx1),
        ("x2".to_string(), nx2),
        ("y".to_string(), c.ny),
        ("y1".to_string(), c.ny1),
        ("y2".to_string(), c.ny2),
    ]);
    let has_u = dims[0].0 == "u";
    let total: usize = dims.iter().map(|(_, s)| *s).product();
    let mut probs = Vec::with_capacity(total);
    for u in 0..nu {
        if !has_u && u > 0 {
            break;
        }
        for v1 in 0..nv1 {
            for v2 in 0..nv2 {
                let p_law = d.law.prob(u, v1, v2);
                for x1 in 0..nx1 {
                    for x2 in 0..nx2 {
                        let p_in = p_law * d.prefix.prob(v1, v2, x1, x2);
                        for y in 0..c.ny {
                            for y1 in 0..c.ny1 {
                                for y2 in 0..c.ny2 {
                                    probs.push(p_in * c.prob(x1, x2, y, y1, y2));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    JointPmf::new(dims, probs)
}

/// One evaluated point of the rate-equivocation region.
#[derive(Debug, Clone)]
pub struct RegionPoint<T> {
    pub r1_max: T,
    pub re_max: T,
    pub feasible: bool,
    /// CF only: whether the evaluated design lies in the regime the
    /// achievability statement covers; other evaluators always set it.
    pub applicable: bool,
    pub terms: Vec<(String, T)>,
}

impl<T: Scalar> RegionPoint<T> {
    fn new(r1_max: T, re_max: T, terms: Vec<(String, T)>) -> Self {
        Self { r1_max, re_max, feasible: true, applicable: true, terms }
    }

    pub fn term(&self, name: &str) -> Option<T> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Outer-bound point: r1 capped by min{I(V1,V2;Y), I(V1;Y,Y1|V2)} and the
/// equivocation by [I(V1,V2;Y|U) − I(V1,V2;Y2|U)]⁺. Requires a design with
/// the auxiliary U axis.
pub fn outer_bound_point<T: Scalar>(
    c: &RelayDmc<T>,
    d: &InputDesign<T>,
) -> Result<RegionPoint<T>> {
    if !d.has_aux() {
        return Err(Error::Contract(
            "outer bound needs a design with the auxiliary u axis".into(),
        ));
    }
    let j = full_joint(c, d)?;
    let i_v_y = j.mutual_information(&["v1", "v2"], &["y"])?;
    let i_v1_yy1 = j.conditional_mi(&["v1"], &["y", "y1"], &["v2"])?;
    let i_v_y_u = j.conditional_mi(&["v1", "v2"], &["y"], &["u"])?;
    let i_v_y2_u = j.conditional_mi(&["v1", "v2"], &["y2"], &["u"])?;
    let r1 = i_v_y.min(i_v1_yy1);
    let re = r1.min((i_v_y_u - i_v_y2_u).max(T::zero()));
    Ok(RegionPoint::new(
        r1,
        re,
        vec![
            ("i_v1v2_y".into(), i_v_y),
            ("i_v1_yy1_given_v2".into(), i_v1_yy1),
            ("i_v1v2_y_given_u".into(), i_v_y_u),
            ("i_v1v2_y2_given_u".into(), i_v_y2_u),
        ],
    ))
}

/// Decode-and-forward point: r1 = min{I(V1,V2;Y), I(V1;Y1|V2)}, secrecy
/// r1 − I(V1,V2;Y2) clamped.
pub fn df_point<T: Scalar>(c: &RelayDmc<T>, d: &InputDesign<T>) -> Result<RegionPoint<T>> {
    if d.has_aux() {
        return Err(Error::Contract("df takes a (v1, v2) design without the u axis".into()));
    }
    let j = full_joint(c, d)?;
    let i_v_y = j.mutual_information(&["v1", "v2"], &["y"])?;
    let i_v1_y1 = j.conditional_mi(&["v1"], &["y1"], &["v2"])?;
    let i_v_y2 = j.mutual_information(&["v1", "v2"], &["y2"])?;
    let r1 = i_v_y.min(i_v1_y1);
    let re = r1.min((r1 - i_v_y2).max(T::zero()));
    Ok(RegionPoint::new(
        r1,
        re,
        vec![
            ("i_v1v2_y".into(), i_v_y),
            ("i_v1_y1_given_v2".into(), i_v1_y1),
            ("i_v1v2_y2".into(), i_v_y2),
        ],
    ))
}

struct NfTerms<T> {
    r1: T,
    expr: T,
    terms: Vec<(String, T)>,
}

fn nf_terms<T: Scalar>(c: &RelayDmc<T>, d: &InputDesign<T>) -> Result<(JointPmf<T>, NfTerms<T>)> {
    if !d.is_product() || !d.prefix.is_factored() {
        return Err(Error::Contract(
            "noise-forwarding requires independent p(v1) p(v2) with a factored prefix".into(),
        ));
    }
    let j = full_joint(c, d)?;
    let r1 = j.conditional_mi(&["v1"], &["y"], &["v2"])?;
    let i_v2_y = j.mutual_information(&["v2"], &["y"])?;
    let i_v2_y2_v1 = j.conditional_mi(&["v2"], &["y2"], &["v1"])?;
    let i_v2_y2 = j.mutual_information(&["v2"], &["y2"])?;
    let i_v1_y2_v2 = j.conditional_mi(&["v1"], &["y2"], &["v2"])?;
    let expr = r1 + i_v2_y.min(i_v2_y2_v1) - i_v2_y.min(i_v2_y2) - i_v1_y2_v2;
    let terms = vec![
        ("i_v1_y_given_v2".into(), r1),
        ("i_v2_y".into(), i_v2_y),
        ("i_v2_y2_given_v1".into(), i_v2_y2_v1),
        ("i_v2_y2".into(), i_v2_y2),
        ("i_v1_y2_given_v2".into(), i_v1_y2_v2),
        ("secrecy_expr".into(), expr),
    ];
    Ok((j, NfTerms { r1, expr, terms }))
}

/// Noise-forwarding point for an independent product design.
pub fn nf_point<T: Scalar>(c: &RelayDmc<T>, d: &InputDesign<T>) -> Result<RegionPoint<T>> {
    let (_, t) = nf_terms(c, d)?;
    let re = t.r1.min(t.expr.max(T::zero()));
    Ok(RegionPoint::new(t.r1, re, t.terms))
}

/// Deaf-helper point: NF secrecy additionally capped by the relay's own
/// equivocation branch [I(V1;Y|V2) − I(V1;Y1|X2)]⁺.
pub fn deaf_nf_point<T: Scalar>(c: &RelayDmc<T>, d: &InputDesign<T>) -> Result<RegionPoint<T>> {
    let (j, t) = nf_terms(c, d)?;
    let i_v1_y1_x2 = j.conditional_mi(&["v1"], &["y1"], &["x2"])?;
    let rs1 = t.r1.min(t.expr.max(T::zero()));
    let rs2 = (t.r1 - i_v1_y1_x2).max(T::zero());
    let mut terms = t.terms;
    terms.push(("i_v1_y1_given_x2".into(), i_v1_y1_x2));
    terms.push(("relay_equivocation".into(), rs2));
    Ok(RegionPoint::new(t.r1, rs1.min(rs2), terms))
}

/// Corollary evaluator for the reversely degraded channel: the achievable
/// secrecy expression is exactly the NF one. Evaluates regardless, but
/// records the degradedness violation so callers can warn.
pub fn reversely_degraded_rate<T: Scalar>(
    c: &RelayDmc<T>,
    d: &InputDesign<T>,
) -> Result<RegionPoint<T>> {
    let report = is_reversely_degraded(c, T::from_f64_lossy(1e-9));
    let mut point = nf_point(c, d)?;
    point
        .terms
        .push(("degradedness_violation".into(), report.max_violation));
    Ok(point)
}

/// Compress-and-forward design: independent inputs, a quantizer
/// p(yh | y1, x2) (rows indexed by y1 * |X2| + x2), and the confusion rate
/// r0 >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CfDesign<T> {
    pub px1: Vec<T>,
    pub px2: Vec<T>,
    pub quantizer: CondPmf<T>,
    pub r0: T,
}

impl<T: Scalar> CfDesign<T> {
    pub fn new(px1: Vec<T>, px2: Vec<T>, quantizer: CondPmf<T>, r0: T) -> Result<Self> {
        validate_pmf(&px1, "px1")?;
        validate_pmf(&px2, "px2")?;
        if quantizer.n_out() == 0 {
            return Err(Error::Validation("quantizer alphabet must be non-empty".into()));
        }
        if !(r0 >= T::zero()) {
            return Err(Error::Validation(format!("r0 must be >= 0, got {r0}")));
        }
        Ok(Self { px1, px2, quantizer, r0 })
    }
}

fn cf_joint<T: Scalar>(c: &RelayDmc<T>, d: &CfDesign<T>) -> Result<JointPmf<T>> {
    if d.px1.len() != c.nx1 || d.px2.len() != c.nx2 {
        return Err(Error::Validation("input pmf sizes mismatch the channel".into()));
    }
    if d.quantizer.n_in() != c.ny1 * c.nx2 {
        return Err(Error::Validation(
            "quantizer rows must cover every (y1, x2) pair".into(),
        ));
    }
    let nyh = d.quantizer.n_out();
    let dims = vec![
        ("x1".to_string(), c.nx1),
        ("x2".to_string(), c.nx2),
        ("y".to_string(), c.ny),
        ("y1".to_string(), c.ny1),
        ("y2".to_string(), c.ny2),
        ("yh".to_string(), nyh),
    ];
    let mut probs = Vec::with_capacity(c.nx1 * c.nx2 * c.ny * c.ny1 * c.ny2 * nyh);
    for x1 in 0..c.nx1 {
        for x2 in 0..c.nx2 {
            let p_in = d.px1[x1] * d.px2[x2];
            for y in 0..c.ny {
                for y1 in 0..c.ny1 {
                    for y2 in 0..c.ny2 {
                        let base = p_in * c.prob(x1, x2, y, y1, y2);
                        for yh in 0..nyh {
                            probs.push(base * d.quantizer.prob(y1 * c.nx2 + x2, yh));
                        }
                    }
                }
            }
        }
    }
    JointPmf::new(dims, probs)
}

/// Largest confusion rate the quantized-observation constraint allows for
/// this design (negative when no r0 >= 0 is feasible).
pub fn cf_max_r0<T: Scalar>(c: &RelayDmc<T>, d: &CfDesign<T>) -> Result<T> {
    let j = cf_joint(c, d)?;
    let i_x2_y = j.mutual_information(&["x2"], &["y"])?;
    let i_x2_y2_x1 = j.conditional_mi(&["x2"], &["y2"], &["x1"])?;
    let i_y1_yh_x2 = j.conditional_mi(&["y1"], &["yh"], &["x2"])?;
    Ok(i_x2_y.min(i_x2_y2_x1) - i_y1_yh_x2)
}

/// Compress-and-forward point. `feasible` reflects the quantization
/// constraint min{I(X2;Y), I(X2;Y2|X1)} − r0 >= I(Y1;Yh|X2); `applicable`
/// reflects the regime I(X1;Yh,Y|X2) <= I(X1;Yh,Y2|X2) the statement
/// covers (flagged rather than extrapolated outside it).
pub fn cf_point<T: Scalar>(c: &RelayDmc<T>, d: &CfDesign<T>) -> Result<RegionPoint<T>> {
    let j = cf_joint(c, d)?;
    let r1 = j.conditional_mi(&["x1"], &["yh", "y"], &["x2"])?;
    let i_alt = j.conditional_mi(&["x1"], &["yh", "y2"], &["x2"])?;
    let i_x2_y = j.mutual_information(&["x2"], &["y"])?;
    let i_x2_y2_x1 = j.conditional_mi(&["x2"], &["y2"], &["x1"])?;
    let i_y1_yh_x2 = j.conditional_mi(&["y1"], &["yh"], &["x2"])?;
    let i_x1x2_y2 = j.mutual_information(&["x1", "x2"], &["y2"])?;

    let slack = T::from_f64_lossy(1e-12);
    let feasible = i_x2_y.min(i_x2_y2_x1) - d.r0 >= i_y1_yh_x2 - slack;
    let applicable = r1 <= i_alt + slack;
    let re = r1.min((d.r0 + r1 - i_x1x2_y2).max(T::zero()));

    let mut point = RegionPoint::new(
        r1,
        re,
        vec![
            ("i_x1_yhy_given_x2".into(), r1),
            ("i_x1_yhy2_given_x2".into(), i_alt),
            ("i_x2_y".into(), i_x2_y),
            ("i_x2_y2_given_x1".into(), i_x2_y2_x1),
            ("i_y1_yh_given_x2".into(), i_y1_yh_x2),
            ("i_x1x2_y2".into(), i_x1x2_y2),
            ("r0".into(), d.r0),
        ],
    );
    point.feasible = feasible;
    point.applicable = applicable;
    Ok(point)
}

/// Which evaluator a grid search drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmcStrategy {
    OuterBound,
    Df,
    Nf,
    Cf,
    DeafNf,
    ReverselyDegraded,
}

impl std::str::FromStr for DmcStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outer" => Ok(DmcStrategy::OuterBound),
            "df" => Ok(DmcStrategy::Df),
            "nf" => Ok(DmcStrategy::Nf),
            "cf" => Ok(DmcStrategy::Cf),
            "deaf-nf" | "deaf_nf" => Ok(DmcStrategy::DeafNf),
            "reversely-degraded" | "corollary" => Ok(DmcStrategy::ReverselyDegraded),
            other => Err(Error::Validation(format!("unknown dmc strategy {other}"))),
        }
    }
}

/// Knobs for [`best_over_grid`].
#[derive(Debug, Clone)]
pub struct DmcGridOptions {
    /// Maximum number of enumerated designs.
    pub budget: usize,
    /// |U| for the outer-bound search.
    pub u_size: usize,
    /// Quantizer output alphabet for CF; defaults to |Y1|.
    pub yhat_size: Option<usize>,
}

impl Default for DmcGridOptions {
    fn default() -> Self {
        Self { budget: 1_000_000, u_size: 2, yhat_size: None }
    }
}

/// Winning design of a grid search.
#[derive(Debug, Clone)]
pub enum BestDesign<T> {
    Input(InputDesign<T>),
    Cf(CfDesign<T>),
}

#[derive(Debug, Clone)]
pub struct GridBest<T> {
    pub point: RegionPoint<T>,
    pub design: BestDesign<T>,
    pub designs_evaluated: usize,
}

fn collect_grid<T: Scalar>(dim: usize, k: usize, budget: usize) -> Result<Vec<Vec<T>>> {
    Ok(simplex_grid::<T>(dim, k, budget)?.collect())
}

/// Exhaustive search over all type-k rational input designs (entries are
/// multiples of 1/k), maximizing the secrecy rate `re_max`. Auxiliary
/// alphabets match the channel inputs with an identity prefix; CF
/// additionally enumerates quantizer rows and uses the largest feasible
/// confusion rate per design. Ties break toward the lexicographically
/// smallest design; infeasible or not-applicable designs are skipped.
pub fn best_over_grid<T: Scalar>(
    c: &RelayDmc<T>,
    strategy: DmcStrategy,
    k: usize,
    opts: &DmcGridOptions,
) -> Result<GridBest<T>> {
    if k == 0 {
        return Err(Error::Validation("grid denominator k must be >= 1".into()));
    }

    // factor grids: the full design space is their cross product
    let factors: Vec<Vec<Vec<T>>> = match strategy {
        DmcStrategy::Nf | DmcStrategy::DeafNf | DmcStrategy::ReverselyDegraded => vec![
            collect_grid(c.nx1, k, opts.budget)?,
            collect_grid(c.nx2, k, opts.budget)?,
        ],
        DmcStrategy::Df => vec![collect_grid(c.nx1 * c.nx2, k, opts.budget)?],
        DmcStrategy::OuterBound => {
            vec![collect_grid(opts.u_size * c.nx1 * c.nx2, k, opts.budget)?]
        }
        DmcStrategy::Cf => {
            let nyh = opts.yhat_size.unwrap_or(c.ny1);
            let rows = c.ny1 * c.nx2;
            let mut f = vec![
                collect_grid(c.nx1, k, opts.budget)?,
                collect_grid(c.nx2, k, opts.budget)?,
            ];
            let row_grid = collect_grid::<T>(nyh, k, opts.budget)?;
            let per_row = simplex_grid_len(nyh, k)?;
            // budget check on the full cross product before enumerating
            let mut total: u128 = (f[0].len() as u128) * (f[1].len() as u128);
            for _ in 0..rows {
                total = total.checked_mul(per_row as u128).ok_or_else(|| {
                    Error::Budget(format!(
                        "cf quantizer grid overflows: {rows} rows over {nyh} symbols at k={k}"
                    ))
                })?;
            }
            if total > opts.budget as u128 {
                return Err(Error::Budget(format!(
                    "cf design grid has {total} points ({} inputs x {} inputs x {per_row}^{rows} quantizers), budget {}",
                    f[0].len(),
                    f[1].len(),
                    opts.budget
                )));
            }
            for _ in 0..rows {
                f.push(row_grid.clone());
            }
            f
        }
    };

    let counts: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total: u128 = counts.iter().map(|&c| c as u128).product();
    if total > opts.budget as u128 {
        return Err(Error::Budget(format!(
            "design grid has {total} points over simplex factors {counts:?}, budget {}",
            opts.budget
        )));
    }
    let total = total as usize;

    let build = |flat: usize| -> Result<BestDesign<T>> {
        let mut rem = flat;
        let mut pick = vec![0usize; counts.len()];
        for i in (0..counts.len()).rev() {
            pick[i] = rem % counts[i];
            rem /= counts[i];
        }
        match strategy {
            DmcStrategy::Nf | DmcStrategy::DeafNf | DmcStrategy::ReverselyDegraded => {
                Ok(BestDesign::Input(InputDesign::product(
                    factors[0][pick[0]].clone(),
                    factors[1][pick[1]].clone(),
                )?))
            }
            DmcStrategy::Df => Ok(BestDesign::Input(InputDesign::joint(
                factors[0][pick[0]].clone(),
                c.nx1,
                c.nx2,
            )?)),
            DmcStrategy::OuterBound => Ok(BestDesign::Input(InputDesign::with_aux(
                factors[0][pick[0]].clone(),
                opts.u_size,
                c.nx1,
                c.nx2,
            )?)),
            DmcStrategy::Cf => {
                let nyh = opts.yhat_size.unwrap_or(c.ny1);
                let rows = c.ny1 * c.nx2;
                let mut q = Vec::with_capacity(rows * nyh);
                for r in 0..rows {
                    q.extend_from_slice(&factors[2 + r][pick[2 + r]]);
                }
                let quantizer = CondPmf::new(rows, nyh, q)?;
                let mut design = CfDesign::new(
                    factors[0][pick[0]].clone(),
                    factors[1][pick[1]].clone(),
                    quantizer,
                    T::zero(),
                )?;
                let r0 = cf_max_r0(c, &design)?;
                if r0 < T::zero() {
                    design.r0 = T::zero(); // evaluated but infeasible
                } else {
                    design.r0 = r0;
                }
                Ok(design).map(BestDesign::Cf)
            }
        }
    };

    let evaluate = |design: &BestDesign<T>| -> Result<RegionPoint<T>> {
        match (strategy, design) {
            (DmcStrategy::Nf, BestDesign::Input(d)) => nf_point(c, d),
            (DmcStrategy::DeafNf, BestDesign::Input(d)) => deaf_nf_point(c, d),
            (DmcStrategy::ReverselyDegraded, BestDesign::Input(d)) => {
                reversely_degraded_rate(c, d)
            }
            (DmcStrategy::Df, BestDesign::Input(d)) => df_point(c, d),
            (DmcStrategy::OuterBound, BestDesign::Input(d)) => outer_bound_point(c, d),
            (DmcStrategy::Cf, BestDesign::Cf(d)) => cf_point(c, d),
            _ => unreachable!(),
        }
    };

    let values: Vec<Option<T>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let design = build(flat).ok()?;
            let point = evaluate(&design).ok()?;
            if point.feasible && point.applicable {
                Some(point.re_max)
            } else {
                None
            }
        })
        .collect();

    let mut best: Option<(usize, T)> = None;
    for (flat, v) in values.iter().enumerate() {
        if let Some(v) = v {
            if best.map_or(true, |(_, bv)| *v > bv) {
                best = Some((flat, *v));
            }
        }
    }
    let (flat, _) = best.ok_or_else(|| {
        Error::Infeasible("no feasible, applicable design on the grid".into())
    })?;
    let design = build(flat)?;
    let point = evaluate(&design)?;
    Ok(GridBest { point, design, designs_evaluated: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Deterministic pseudo-random channel (xorshift-based).
    pub(crate) fn random_channel(sizes: [usize; 5], seed: u64) -> RelayDmc<f64> {
        let mut state = seed.max(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let slice = sizes[2] * sizes[3] * sizes[4];
        let mut probs = Vec::with_capacity(sizes.iter().product());
        for _ in 0..sizes[0] * sizes[1] {
            let mut chunk: Vec<f64> = (0..slice).map(|_| next() + 1e-3).collect();
            let s: f64 = chunk.iter().sum();
            chunk.iter_mut().for_each(|p| *p /= s);
            probs.extend(chunk);
        }
        RelayDmc::new(sizes, probs).unwrap()
    }

    fn uniform_design(c: &RelayDmc<f64>) -> InputDesign<f64> {
        InputDesign::product(
            vec![1.0 / c.nx1 as f64; c.nx1],
            vec![1.0 / c.nx2 as f64; c.nx2],
        )
        .unwrap()
    }

    #[test]
    fn outer_bound_requires_aux_axis() {
        let c = random_channel([2, 2, 2, 2, 2], 5);
        let d = uniform_design(&c);
        assert!(matches!(outer_bound_point(&c, &d), Err(Error::Contract(_))));
    }

    #[test]
    fn outer_bound_constant_u_reduces_to_unconditioned_difference() {
        let c = random_channel([2, 2, 2, 2, 2], 11);
        let puv = vec![0.1, 0.3, 0.2, 0.4];
        let d = InputDesign::with_aux(puv.clone(), 1, 2, 2).unwrap();
        let p = outer_bound_point(&c, &d).unwrap();
        let plain = InputDesign::joint(puv, 2, 2).unwrap();
        let j = full_joint(&c, &plain).unwrap();
        let diff = (j.mutual_information(&["v1", "v2"], &["y"]).unwrap()
            - j.mutual_information(&["v1", "v2"], &["y2"]).unwrap())
        .max(0.0);
        assert_relative_eq!(p.re_max, p.r1_max.min(diff), epsilon = 1e-12);
    }

    #[test]
    fn outer_bound_zero_when_eavesdropper_sees_destination_signal() {
        // y2 is an exact copy of y
        let base = random_channel([2, 2, 2, 2, 1], 17);
        let mut probs = vec![0.0; 2 * 2 * 2 * 2 * 2];
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y in 0..2 {
                    for y1 in 0..2 {
                        let p: f64 = base.prob(x1, x2, y, y1, 0);
                        probs[(((x1 * 2 + x2) * 2 + y) * 2 + y1) * 2 + y] = p;
                    }
                }
            }
        }
        let c = RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap();
        let d = InputDesign::with_aux(vec![0.15, 0.35, 0.25, 0.25], 1, 2, 2).unwrap();
        let p = outer_bound_point(&c, &d).unwrap();
        assert!(p.re_max.abs() < 1e-12);
    }

    #[test]
    fn df_deaf_relay_r1_zero() {
        // y1 constant regardless of inputs
        let c = random_channel([2, 2, 2, 1, 2], 23);
        let d = InputDesign::joint(vec![0.2, 0.3, 0.1, 0.4], 2, 2).unwrap();
        let p = df_point(&c, &d).unwrap();
        assert!(p.r1_max.abs() < 1e-12);
        assert!(p.re_max.abs() < 1e-12);
    }

    #[test]
    fn df_blind_eavesdropper_full_secrecy() {
        let c = random_channel([2, 2, 2, 2, 1], 29);
        let d = InputDesign::joint(vec![0.2, 0.3, 0.1, 0.4], 2, 2).unwrap();
        let p = df_point(&c, &d).unwrap();
        assert_relative_eq!(p.re_max, p.r1_max, epsilon = 1e-12);
        assert!(p.r1_max > 0.0);
    }

    #[test]
    fn nf_rejects_correlated_design() {
        let c = random_channel([2, 2, 2, 2, 2], 31);
        let d = InputDesign::joint(vec![0.5, 0.0, 0.0, 0.5], 2, 2).unwrap();
        assert!(matches!(nf_point(&c, &d), Err(Error::Contract(_))));
    }

    #[test]
    fn nf_silent_relay_is_wiretap_difference() {
        let c = random_channel([2, 1, 2, 2, 2], 37);
        let d = InputDesign::product(vec![0.3, 0.7], vec![1.0]).unwrap();
        let p = nf_point(&c, &d).unwrap();
        let w = crate::channel::wiretap_reduction(&c, 0).unwrap();
        let j = w.joint(&[0.3, 0.7]).unwrap();
        let expected = (j.mutual_information(&["x1"], &["y"]).unwrap()
            - j.mutual_information(&["x1"], &["y2"]).unwrap())
        .max(0.0);
        assert_relative_eq!(p.re_max, expected, epsilon = 1e-12);
    }

    #[test]
    fn nf_zero_when_outputs_statistically_identical() {
        // y and y2 driven by the same conditional law
        let mut probs = vec![0.0; 32];
        for x1 in 0..2 {
            for x2 in 0..2 {
                let flip = if x1 == 0 { 0.2 } else { 0.3 };
                for y in 0..2usize {
                    for y1 in 0..2 {
                        for y2 in 0..2usize {
                            let py = if y == x1 { 1.0 - flip } else { flip };
                            let py2 = if y2 == x1 { 1.0 - flip } else { flip };
                            probs[(((x1 * 2 + x2) * 2 + y) * 2 + y1) * 2 + y2] =
                                py * py2 * 0.5;
                        }
                    }
                }
            }
        }
        let c = RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap();
        let p = nf_point(&c, &uniform_design(&c)).unwrap();
        assert!(p.re_max.abs() < 1e-12, "re {}", p.re_max);
    }

    #[test]
    fn cf_at_max_r0_with_trivial_quantizer_equals_nf() {
        // stay in the regime the CF statement covers
        let mut seed = 41;
        let (c, d) = loop {
            assert!(seed < 1_000, "no applicable instance found");
            let c = random_channel([2, 2, 2, 2, 2], seed);
            let quantizer = CondPmf::new(c.ny1 * c.nx2, 1, vec![1.0; c.ny1 * c.nx2]).unwrap();
            let mut d = CfDesign::new(vec![0.4, 0.6], vec![0.25, 0.75], quantizer, 0.0).unwrap();
            d.r0 = cf_max_r0(&c, &d).unwrap().max(0.0);
            let p = cf_point(&c, &d).unwrap();
            if p.applicable && p.feasible {
                break (c, d);
            }
            seed += 1;
        };
        let p_cf = cf_point(&c, &d).unwrap();
        let nf_d = InputDesign::product(vec![0.4, 0.6], vec![0.25, 0.75]).unwrap();
        let p_nf = nf_point(&c, &nf_d).unwrap();
        assert_relative_eq!(p_cf.re_max, p_nf.re_max, epsilon = 1e-12);
        assert_relative_eq!(p_cf.r1_max, p_nf.r1_max, epsilon = 1e-12);
    }

    #[test]
    fn cf_identity_quantizer_feasibility_matches_entropy_bound() {
        let c = random_channel([2, 2, 2, 2, 2], 43);
        let quantizer = {
            // yh = y1 exactly, for every x2
            let mut rows = vec![0.0; (c.ny1 * c.nx2) * c.ny1];
            for y1 in 0..c.ny1 {
                for x2 in 0..c.nx2 {
                    rows[(y1 * c.nx2 + x2) * c.ny1 + y1] = 1.0;
                }
            }
            CondPmf::new(c.ny1 * c.nx2, c.ny1, rows).unwrap()
        };
        let d = CfDesign::new(vec![0.5, 0.5], vec![0.5, 0.5], quantizer, 0.0).unwrap();
        let p = cf_point(&c, &d).unwrap();
        let j = cf_joint(&c, &d).unwrap();
        let h_y1_x2 = j.entropy_of(&["y1", "x2"]).unwrap() - j.entropy_of(&["x2"]).unwrap();
        let lhs = p.term("i_x2_y").unwrap().min(p.term("i_x2_y2_given_x1").unwrap());
        assert_eq!(p.feasible, lhs >= h_y1_x2 - 1e-12);
        assert_relative_eq!(p.term("i_y1_yh_given_x2").unwrap(), h_y1_x2, epsilon = 1e-10);
    }

    /// Channel where the relay input reaches both receivers strongly, so a
    /// weakly informative quantizer leaves a wide feasible r0 range.
    fn cf_friendly_channel() -> RelayDmc<f64> {
        let p_y1 = [[0.05, 0.6], [0.4, 0.95]]; // p(y=1 | x1, x2)
        let mut probs = vec![0.0; 32];
        for x1 in 0..2usize {
            for x2 in 0..2usize {
                for y in 0..2usize {
                    let p1 = p_y1[x1][x2];
                    let py = if y == 1 { p1 } else { 1.0 - p1 };
                    for y1 in 0..2usize {
                        let q = if y1 == x1 { 0.8 } else { 0.2 };
                        for y2 in 0..2usize {
                            let pe = if y2 == x2 { 0.85 } else { 0.15 };
                            probs[(((x1 * 2 + x2) * 2 + y) * 2 + y1) * 2 + y2] = py * q * pe;
                        }
                    }
                }
            }
        }
        RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap()
    }

    #[test]
    fn cf_secrecy_nondecreasing_in_r0() {
        let c = cf_friendly_channel();
        let quantizer =
            CondPmf::new(c.ny1 * c.nx2, 2, vec![0.6, 0.4, 0.55, 0.45, 0.45, 0.55, 0.4, 0.6])
                .unwrap();
        let base = CfDesign::new(vec![0.5, 0.5], vec![0.5, 0.5], quantizer, 0.0).unwrap();
        let r0_max = cf_max_r0(&c, &base).unwrap();
        assert!(r0_max > 0.02, "r0_max {r0_max}");
        let mut last = -1.0;
        let mut r0 = 0.0;
        while r0 <= r0_max {
            let d = CfDesign { r0, ..base.clone() };
            let p = cf_point(&c, &d).unwrap();
            assert!(p.feasible);
            assert!(p.re_max >= last - 1e-12);
            last = p.re_max;
            r0 += r0_max / 12.0;
        }
        // just past the cap the constraint trips
        let d = CfDesign { r0: r0_max + 1e-6, ..base };
        assert!(!cf_point(&c, &d).unwrap().feasible);
    }

    #[test]
    fn deaf_relay_hears_constant_equals_nf() {
        let c = random_channel([2, 2, 2, 1, 2], 53);
        let d = uniform_design(&c);
        let nf = nf_point(&c, &d).unwrap();
        let deaf = deaf_nf_point(&c, &d).unwrap();
        assert_relative_eq!(deaf.re_max, nf.re_max, epsilon = 1e-12);
    }

    #[test]
    fn deaf_relay_sees_destination_output_zero() {
        // y1 is an exact copy of y
        let base = random_channel([2, 2, 2, 1, 2], 59);
        let mut probs = vec![0.0; 32];
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y in 0..2 {
                    for y2 in 0..2 {
                        probs[(((x1 * 2 + x2) * 2 + y) * 2 + y) * 2 + y2] =
                            base.prob(x1, x2, y, 0, y2);
                    }
                }
            }
        }
        let c = RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap();
        let p = deaf_nf_point(&c, &uniform_design(&c)).unwrap();
        assert!(p.re_max.abs() < 1e-12);
        assert!(p.term("relay_equivocation").unwrap().abs() < 1e-12);
    }

    #[test]
    fn deaf_never_exceeds_nf() {
        for seed in [61, 67, 71, 73] {
            let c = random_channel([2, 2, 2, 2, 2], seed);
            let d = InputDesign::product(vec![0.35, 0.65], vec![0.2, 0.8]).unwrap();
            let nf = nf_point(&c, &d).unwrap();
            let deaf = deaf_nf_point(&c, &d).unwrap();
            assert!(deaf.re_max <= nf.re_max + 1e-12);
        }
    }

    #[test]
    fn corollary_is_nf_formula_and_reports_violation() {
        let c = random_channel([2, 2, 2, 2, 2], 79);
        let d = uniform_design(&c);
        let nf = nf_point(&c, &d).unwrap();
        let cor = reversely_degraded_rate(&c, &d).unwrap();
        assert_eq!(cor.re_max, nf.re_max);
        assert!(cor.term("degradedness_violation").is_some());
    }

    #[test]
    fn outer_bound_with_constant_u_dominates_df() {
        for seed in [83, 89, 97] {
            let c = random_channel([2, 2, 2, 2, 2], seed);
            let pv = vec![0.15, 0.35, 0.3, 0.2];
            let df = df_point(&c, &InputDesign::joint(pv.clone(), 2, 2).unwrap()).unwrap();
            let outer =
                outer_bound_point(&c, &InputDesign::with_aux(pv, 1, 2, 2).unwrap()).unwrap();
            assert!(outer.re_max >= df.re_max - 1e-9);
        }
    }

    #[test]
    fn grid_k1_is_best_deterministic_input() {
        let c = random_channel([2, 2, 2, 2, 2], 101);
        let best = best_over_grid(&c, DmcStrategy::Nf, 1, &DmcGridOptions::default()).unwrap();
        let mut manual: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let mut pv1 = vec![0.0; 2];
                pv1[a] = 1.0;
                let mut pv2 = vec![0.0; 2];
                pv2[b] = 1.0;
                let d = InputDesign::product(pv1, pv2).unwrap();
                manual = manual.max(nf_point(&c, &d).unwrap().re_max);
            }
        }
        assert_relative_eq!(best.point.re_max, manual, epsilon = 1e-14);
        assert_eq!(best.designs_evaluated, 4);
    }

    #[test]
    fn grid_doubling_never_decreases() {
        let c = random_channel([2, 2, 2, 2, 2], 103);
        let opts = DmcGridOptions::default();
        for strat in [DmcStrategy::Nf, DmcStrategy::Df, DmcStrategy::DeafNf] {
            let coarse = best_over_grid(&c, strat, 3, &opts).unwrap();
            let fine = best_over_grid(&c, strat, 6, &opts).unwrap();
            assert!(
                fine.point.re_max >= coarse.point.re_max - 1e-14,
                "{strat:?}: {} < {}",
                fine.point.re_max,
                coarse.point.re_max
            );
        }
    }

    #[test]
    fn grid_budget_error_names_dimensions() {
        let c = random_channel([3, 3, 2, 2, 2], 107);
        let opts = DmcGridOptions { budget: 10, ..DmcGridOptions::default() };
        match best_over_grid(&c, DmcStrategy::Df, 10, &opts) {
            Err(Error::Budget(msg)) => assert!(msg.contains("budget")),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn classical_reversely_degraded_capacity_matches_direct_grid() {
        // reversely degraded construction: p(y|x1,x2) then p(y1|y,x2)
        let mut probs = vec![0.0; 32];
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y in 0..2usize {
                    let flip = if x2 == 0 { 0.1 } else { 0.2 };
                    let py = if y == x1 { 1.0 - flip } else { flip };
                    for y1 in 0..2usize {
                        let q = if y1 == y { 0.7 } else { 0.3 };
                        for y2 in 0..2 {
                            probs[(((x1 * 2 + x2) * 2 + y) * 2 + y1) * 2 + y2] =
                                py * q * 0.5;
                        }
                    }
                }
            }
        }
        let c = RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap();
        assert!(is_reversely_degraded(&c, 1e-9).reversely_degraded);

        // capacity of the classical channel: max over x2 and p(x1) of
        // I(X1;Y|x2), via the wiretap reduction and a fine input grid
        let mut via_machinery: f64 = 0.0;
        for x2 in 0..2 {
            let w = crate::channel::wiretap_reduction(&c, x2).unwrap();
            for px in simplex_grid::<f64>(2, 400, 1_000_000).unwrap() {
                let j = w.joint(&px).unwrap();
                via_machinery =
                    via_machinery.max(j.mutual_information(&["x1"], &["y"]).unwrap());
            }
        }

        // independent raw-loop evaluation of the same quantity
        let mut direct: f64 = 0.0;
        for x2 in 0..2 {
            for step in 0..=400 {
                let p0 = step as f64 / 400.0;
                let px = [p0, 1.0 - p0];
                let mut joint = [[0.0f64; 2]; 2]; // (x1, y)
                for x1 in 0..2 {
                    for y in 0..2 {
                        let mut s = 0.0;
                        for y1 in 0..2 {
                            for y2 in 0..2 {
                                s += c.prob(x1, x2, y, y1, y2);
                            }
                        }
                        joint[x1][y] = px[x1] * s;
                    }
                }
                let mut mi = 0.0;
                for x1 in 0..2 {
                    for y in 0..2 {
                        let pxy = joint[x1][y];
                        if pxy > 1e-15 {
                            let px_m = joint[x1][0] + joint[x1][1];
                            let py_m = joint[0][y] + joint[1][y];
                            mi += pxy * (pxy / (px_m * py_m)).log2();
                        }
                    }
                }
                direct = direct.max(mi);
            }
        }
        assert_relative_eq!(via_machinery, direct, epsilon = 1e-10);
    }

    #[test]
    fn degraded_channel_nf_beats_df_bottleneck() {
        // relay hears a noisier copy of y; eavesdropper very noisy
        let mut probs = vec![0.0; 32];
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y in 0..2usize {
                    let py = if y == x1 { 0.9 } else { 0.1 };
                    for y1 in 0..2usize {
                        let q = if y1 == y { 0.75 } else { 0.25 };
                        for y2 in 0..2usize {
                            let pe = if y2 == x1 { 0.55 } else { 0.45 };
                            probs[(((x1 * 2 + x2) * 2 + y) * 2 + y1) * 2 + y2] =
                                py * q * pe;
                        }
                    }
                }
            }
        }
        let c = RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap();
        let d = uniform_design(&c);
        let cor = reversely_degraded_rate(&c, &d).unwrap();
        let df = df_point(&c, &InputDesign::joint(vec![0.25; 4], 2, 2).unwrap()).unwrap();
        assert!(cor.re_max > 0.0);
        // df r1 is capped by the relay-decoding branch
        assert_relative_eq!(
            df.r1_max,
            df.term("i_v1_y1_given_v2").unwrap(),
            epsilon = 1e-12
        );
        assert!(df.term("i_v1_y1_given_v2").unwrap() < df.term("i_v1v2_y").unwrap());
    }

    #[test]
    fn evaluators_invariant_under_relabeling() {
        let c = random_channel([2, 2, 2, 2, 2], 113);
        // swap the two symbols of y2
        let mut probs = vec![0.0; 32];
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y in 0..2 {
                    for y1 in 0..2 {
                        for y2 in 0..2 {
                            probs[(((x1 * 2 + x2) * 2 + y) * 2 + y1) * 2 + (1 - y2)] =
                                c.prob(x1, x2, y, y1, y2);
                        }
                    }
                }
            }
        }
        let swapped = RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap();
        let d = InputDesign::product(vec![0.3, 0.7], vec![0.6, 0.4]).unwrap();
        let a = nf_point(&c, &d).unwrap();
        let b = nf_point(&swapped, &d).unwrap();
        assert_relative_eq!(a.re_max, b.re_max, epsilon = 1e-12);
        let a = deaf_nf_point(&c, &d).unwrap();
        let b = deaf_nf_point(&swapped, &d).unwrap();
        assert_relative_eq!(a.re_max, b.re_max, epsilon = 1e-12);
    }
}
