//! Closed-form AWGN secrecy-rate evaluators for the relay-eavesdropper
//! channel: the relay-free wiretap baseline, decode-and-forward (DF),
//! noise-forwarding (NF), compress-and-forward (CF, which coincides with NF
//! here), two-symbol amplify-and-forward (AF), the deaf-helper variant of
//! NF, and the Gaussian evaluation of the rate-equivocation outer bound.
//!
//! Every evaluator returns the achieved rate in bits per channel use
//! together with the optimizing parameters and each min{·} branch value.

use crate::channel::{ChannelGains, PhaseDraw, PhaseModel, Topology};
use crate::error::{Error, Result};
use crate::optim::{grid_refine, BoxAxis, BoxSpec, GridSearchSettings};
use crate::scalar::Scalar;
use num_complex::Complex;
use rayon::prelude::*;

/// Cooperation strategy selector (`OuterBound` tags the bound evaluator's
/// result rather than an achievability scheme).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Wiretap,
    Df,
    Nf,
    Cf,
    Af,
    DeafNf,
    OuterBound,
}

impl Strategy {
    /// The six achievability schemes, in column order.
    pub const ALL: [Strategy; 6] = [
        Strategy::Wiretap,
        Strategy::Df,
        Strategy::Nf,
        Strategy::Cf,
        Strategy::Af,
        Strategy::DeafNf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Wiretap => "wiretap",
            Strategy::Df => "df",
            Strategy::Nf => "nf",
            Strategy::Cf => "cf",
            Strategy::Af => "af",
            Strategy::DeafNf => "deaf-nf",
            Strategy::OuterBound => "outer",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wiretap" => Ok(Strategy::Wiretap),
            "df" => Ok(Strategy::Df),
            "nf" => Ok(Strategy::Nf),
            "cf" => Ok(Strategy::Cf),
            "af" => Ok(Strategy::Af),
            "deaf-nf" | "deaf_nf" => Ok(Strategy::DeafNf),
            "outer" => Ok(Strategy::OuterBound),
            other => Err(Error::Validation(format!("unknown strategy {other}"))),
        }
    }
}

/// A secrecy rate plus the parameters and branch diagnostics behind it.
///
/// `branch_values` always carries a `pre_clamp` entry; the reported rate is
/// its [·]⁺ clamp (except for Monte-Carlo averages, which report a mean).
#[derive(Debug, Clone)]
pub struct StrategyResult<T> {
    pub strategy: Strategy,
    pub rate: T,
    pub params: Vec<(String, T)>,
    pub branch_values: Vec<(String, T)>,
    pub converged: bool,
    pub note: Option<String>,
}

impl<T: Scalar> StrategyResult<T> {
    fn from_pre_clamp(
        strategy: Strategy,
        pre_clamp: T,
        params: Vec<(String, T)>,
        mut branch_values: Vec<(String, T)>,
    ) -> Self {
        branch_values.push(("pre_clamp".into(), pre_clamp));
        Self {
            strategy,
            rate: pre_clamp.max(T::zero()),
            params,
            branch_values,
            converged: true,
            note: None,
        }
    }

    pub fn branch(&self, name: &str) -> Option<T> {
        self.branch_values
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

fn half<T: Scalar>() -> T {
    T::from_f64_lossy(0.5)
}

fn log2_ratio<T: Scalar>(num: T, den: T) -> T {
    half::<T>() * (num / den).log2()
}

/// Secrecy capacity of the relay-free Gaussian wiretap channel,
/// [C_main − C_eavesdropper]⁺ at full source power.
pub fn wiretap_baseline<T: Scalar>(g: &ChannelGains<T>) -> StrategyResult<T> {
    let c_main = half::<T>() * (T::one() + g.sd2() * g.p1).log2();
    let c_eve = half::<T>() * (T::one() + g.sw2() * g.p1).log2();
    StrategyResult::from_pre_clamp(
        Strategy::Wiretap,
        c_main - c_eve,
        vec![],
        vec![("main".into(), c_main), ("eavesdropper".into(), c_eve)],
    )
}

pub fn df_default_settings() -> GridSearchSettings {
    GridSearchSettings { resolutions: vec![51], levels: 3, budget: 1_000_000 }
}

pub fn af_default_settings() -> GridSearchSettings {
    GridSearchSettings { resolutions: vec![21], levels: 3, budget: 1_000_000 }
}

fn df_branches<T: Scalar>(g: &ChannelGains<T>, c1: T, p: T) -> (T, T) {
    let eve = (g.h_sw * c1 + g.h_rw).norm_sqr() * g.p2 + g.sw2() * p;
    let b1 = log2_ratio(T::one() + g.sr2() * p, T::one() + eve);
    let dest = (g.h_sd * c1 + g.h_rd).norm_sqr() * g.p2 + g.sd2() * p;
    let b2 = log2_ratio(T::one() + dest, T::one() + eve);
    (b1, b2)
}

/// Decode-and-forward rate: maximizes the two-branch min over the
/// beamforming scalar c1 and the fresh-information power P, subject to
/// |c1|²P2 + P <= P1. In the all-real model c1 spans both signs; with
/// phased eavesdropper links it is restricted to coherent (nonnegative)
/// combining.
pub fn df_rate<T: Scalar>(
    g: &ChannelGains<T>,
    settings: &GridSearchSettings,
) -> Result<StrategyResult<T>> {
    let (c1_lo, c1_hi) = if g.p2 > T::zero() {
        let c1_max = (g.p1 / g.p2).sqrt();
        (if g.is_real() { -c1_max } else { T::zero() }, c1_max)
    } else {
        (T::zero(), T::zero())
    };
    let p1 = g.p1;
    let p2 = g.p2;
    let slack = (p1.max(T::one())) * T::from_f64_lossy(1e-12);
    let spec = BoxSpec::new(vec![
        BoxAxis::new("c1", c1_lo, c1_hi),
        BoxAxis::new("P", T::zero(), p1),
    ])?
    .with_constraint(move |pt: &[T]| pt[0] * pt[0] * p2 + pt[1] <= p1 + slack)?;

    let report = grid_refine(
        |pt: &[T]| {
            let (b1, b2) = df_branches(g, pt[0], pt[1]);
            Some(b1.min(b2))
        },
        &spec,
        settings,
    )?;

    let (c1, p) = (report.best_point[0], report.best_point[1]);
    let (b1, b2) = df_branches(g, c1, p);
    let mut res = StrategyResult::from_pre_clamp(
        Strategy::Df,
        b1.min(b2),
        vec![("c1".into(), c1), ("P".into(), p)],
        vec![("relay_decoding".into(), b1), ("destination".into(), b2)],
    );
    res.converged = report.converged;
    Ok(res)
}

fn nf_branches<T: Scalar>(g: &ChannelGains<T>) -> (T, T, T) {
    let one = T::one();
    let b1 = half::<T>() * (one + g.sd2() * g.p1).log2();
    let den = one + g.sw2() * g.p1 + g.rw2() * g.p2;
    let b2 = log2_ratio(one + g.sd2() * g.p1 + g.rd2() * g.p2, den);
    let b3 = log2_ratio((one + g.rw2() * g.p2) * (one + g.sd2() * g.p1), den);
    (b1, b2, b3)
}

/// Noise-forwarding rate at full powers with independent Gaussian inputs.
/// No optimization is involved; the three min{·} branches are closed forms
/// in the gain magnitudes only.
pub fn nf_rate<T: Scalar>(g: &ChannelGains<T>) -> StrategyResult<T> {
    let (b1, b2, b3) = nf_branches(g);
    StrategyResult::from_pre_clamp(
        Strategy::Nf,
        b1.min(b2).min(b3),
        vec![],
        vec![
            ("direct".into(), b1),
            ("sum_advantage".into(), b2),
            ("relay_codeword_secured".into(), b3),
        ],
    )
}

/// Compress-and-forward on the AWGN channel: for the perfect-secrecy rate
/// this coincides with noise-forwarding, so the evaluator is an alias that
/// carries a provenance note.
pub fn cf_rate_awgn<T: Scalar>(g: &ChannelGains<T>) -> StrategyResult<T> {
    let mut res = nf_rate(g);
    res.strategy = Strategy::Cf;
    res.note = Some(
        "CF with maximal confusion rate reduces to NF for the perfect-secrecy lower bound".into(),
    );
    res
}

/// Deaf-helper NF: the NF secrecy expression additionally capped by the
/// relay's own equivocation branch [I(X1;Y|X2) − I(X1;Y1|X2)]⁺.
pub fn deaf_nf_rate_awgn<T: Scalar>(g: &ChannelGains<T>) -> StrategyResult<T> {
    let (b1, b2, b3) = nf_branches(g);
    let rs1 = b1.min(b2).min(b3);
    let rs2 = (log2_ratio(T::one() + g.sd2() * g.p1, T::one() + g.sr2() * g.p1)).max(T::zero());
    StrategyResult::from_pre_clamp(
        Strategy::DeafNf,
        rs1.min(rs2),
        vec![],
        vec![
            ("direct".into(), b1),
            ("sum_advantage".into(), b2),
            ("relay_codeword_secured".into(), b3),
            ("relay_equivocation".into(), rs2),
        ],
    )
}

/// The two-symbol AF block matrices in the natural (alpha, beta, gamma)
/// parameterization: received blocks are Y = H1 X + Z, Y2 = H2 X + Z2 with
/// noise covariances A and B.
#[derive(Debug, Clone)]
pub struct AfMatrices<T> {
    pub h1: [[Complex<T>; 2]; 2],
    pub h2: [[Complex<T>; 2]; 2],
    pub a_diag: [T; 2],
    pub b_diag: [T; 2],
}

impl<T: Scalar> AfMatrices<T> {
    pub fn build(g: &ChannelGains<T>, alpha: T, beta: T, gamma: T) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let relay_d = g.h_sr * g.h_rd * gamma;
        let relay_w = g.h_sr * g.h_rw * gamma;
        AfMatrices {
            h1: [[g.h_sd, zero], [g.h_sd * beta + relay_d, g.h_sd * alpha]],
            h2: [[g.h_sw, zero], [g.h_sw * beta + relay_w, g.h_sw * alpha]],
            a_diag: [T::one(), T::one() + gamma * gamma * g.rd2()],
            b_diag: [T::one(), T::one() + gamma * gamma * g.rw2()],
        }
    }
}

/// Pre-clamp AF objective at amplitude-scaled parameters: `a = alpha·√P`,
/// `b = beta·√P`, which keeps the covariance entries finite on the P -> 0
/// boundary of the search box.
pub fn af_objective_scaled<T: Scalar>(g: &ChannelGains<T>, p: T, a: T, b: T, gamma: T) -> T {
    let sqrt_p = p.sqrt();
    let one = T::one();
    // destination covariance P·H1 H1^H
    let u = g.h_sd * b + g.h_sr * g.h_rd * (gamma * sqrt_p);
    let s00 = p * g.sd2();
    let s01 = g.h_sd * sqrt_p * u.conj();
    let s11 = u.norm_sqr() + a * a * g.sd2();
    let noise2_d = one + gamma * gamma * g.rd2();
    let det_d = (s00 + one) * (s11 + noise2_d) - s01.norm_sqr();
    // eavesdropper covariance P·H2 H2^H
    let v = g.h_sw * b + g.h_sr * g.h_rw * (gamma * sqrt_p);
    let t00 = p * g.sw2();
    let t01 = g.h_sw * sqrt_p * v.conj();
    let t11 = v.norm_sqr() + a * a * g.sw2();
    let noise2_w = one + gamma * gamma * g.rw2();
    let det_w = (t00 + one) * (t11 + noise2_w) - t01.norm_sqr();

    // 1/4 factor: the block spans two channel uses
    T::from_f64_lossy(0.25) * ((det_d * noise2_w) / (det_w * noise2_d)).log2()
}

/// Two-symbol amplify-and-forward rate: maximizes over the source scaling
/// pair (alpha, beta), the relay amplification gamma, and the per-symbol
/// power P, under (1+alpha²+beta²)P <= 2P1 and gamma²(|h_sr|²P+1) <= 2P2.
pub fn af_rate<T: Scalar>(
    g: &ChannelGains<T>,
    settings: &GridSearchSettings,
) -> Result<StrategyResult<T>> {
    let two = T::from_f64_lossy(2.0);
    let p1 = g.p1;
    let p2 = g.p2;
    let sr2 = g.sr2();
    let a_max = (two * p1).sqrt();
    let g_max = (two * p2).sqrt();
    let slack = (p1.max(p2).max(T::one())) * T::from_f64_lossy(1e-12);
    let spec = BoxSpec::new(vec![
        BoxAxis::new("P", T::zero(), two * p1),
        BoxAxis::new("a", T::zero(), a_max),
        BoxAxis::new("b", T::zero(), a_max),
        BoxAxis::new("gamma", T::zero(), g_max),
    ])?
    .with_constraint(move |pt: &[T]| {
        pt[0] + pt[1] * pt[1] + pt[2] * pt[2] <= two * p1 + slack
            && pt[3] * pt[3] * (sr2 * pt[0] + T::one()) <= two * p2 + slack
    })?;

    let report = grid_refine(
        |pt: &[T]| Some(af_objective_scaled(g, pt[0], pt[1], pt[2], pt[3])),
        &spec,
        settings,
    )?;

    let (p, a, b, gamma) = (
        report.best_point[0],
        report.best_point[1],
        report.best_point[2],
        report.best_point[3],
    );
    let pre = af_objective_scaled(g, p, a, b, gamma);
    let sqrt_p = p.sqrt();
    let (alpha, beta) = if p > T::zero() {
        (a / sqrt_p, b / sqrt_p)
    } else {
        (T::zero(), T::zero())
    };
    let mut res = StrategyResult::from_pre_clamp(
        Strategy::Af,
        pre,
        vec![
            ("alpha".into(), alpha),
            ("beta".into(), beta),
            ("gamma_relay".into(), gamma),
            ("P".into(), p),
        ],
        vec![],
    );
    res.converged = report.converged;
    Ok(res)
}

struct BoundTerms<T> {
    t1: T,
    t2: T,
    t3: T,
    value: T,
}

/// Gaussian-family outer bound evaluated at source variance q1 and input
/// correlation rho (relay variance pinned at P2).
fn bound_terms<T: Scalar>(g: &ChannelGains<T>, q1: T, rho: T) -> BoundTerms<T> {
    let one = T::one();
    let two = T::from_f64_lossy(2.0);
    let rho = rho.max(-one).min(one);
    let cross = two * rho * (q1 * g.p2).sqrt();
    let cd = (g.h_sd * g.h_rd.conj()).re;
    let cw = (g.h_sw * g.h_rw.conj()).re;
    let var_y = one + g.sd2() * q1 + g.rd2() * g.p2 + cross * cd;
    let var_y2 = one + g.sw2() * q1 + g.rw2() * g.p2 + cross * cw;
    let t1 = half::<T>() * var_y.log2();
    let t3 = half::<T>() * var_y2.log2();
    let spread = (q1 * (one - rho * rho) * (g.sd2() + g.sr2())).max(T::zero());
    let t2 = half::<T>() * (one + spread).log2();
    let value = t1.min(t2).min((t1 - t3).max(T::zero()));
    BoundTerms { t1, t2, t3, value }
}

/// Best rho for a fixed q1. The equivocation difference is monotone in rho
/// (its variance ratio is a ratio of linear functions) while the
/// conditional-information cap peaks at rho = 0, so the maximum sits at
/// rho in {-1, 0, 1} or at their crossing, located by bisection.
fn bound_best_rho<T: Scalar>(g: &ChannelGains<T>, q1: T) -> (T, T) {
    let one = T::one();
    let value = |rho: T| bound_terms(g, q1, rho).value;
    if q1 <= T::zero() {
        return (T::zero(), value(T::zero()));
    }
    let two = T::from_f64_lossy(2.0);
    let s = (q1 * g.p2).sqrt();
    let cd = (g.h_sd * g.h_rd.conj()).re;
    let cw = (g.h_sw * g.h_rw.conj()).re;
    let n0 = one + g.sd2() * q1 + g.rd2() * g.p2;
    let n1 = two * s * cd;
    let d0 = one + g.sw2() * q1 + g.rw2() * g.p2;
    let d1 = two * s * cw;
    let slope = n1 * d0 - n0 * d1;

    let diff = |rho: T| {
        (half::<T>() * ((n0 + n1 * rho) / (d0 + d1 * rho)).log2()).max(T::zero())
    };
    let cap = |rho: T| {
        half::<T>() * (one + (q1 * (one - rho * rho) * (g.sd2() + g.sr2())).max(T::zero())).log2()
    };

    let mut cands = vec![-one, T::zero(), one];
    if slope != T::zero() {
        // bisect diff - cap on the side where diff grows
        let (mut a, mut b) = if slope > T::zero() {
            (T::zero(), one)
        } else {
            (T::zero(), -one)
        };
        let phi = |r: T| diff(r) - cap(r);
        if phi(a) < T::zero() && phi(b) > T::zero() {
            for _ in 0..100 {
                let m = (a + b) * half::<T>();
                if phi(m) < T::zero() {
                    a = m;
                } else {
                    b = m;
                }
            }
            cands.push((a + b) * half::<T>());
        }
    }
    let mut best = (cands[0], value(cands[0]));
    for &r in &cands[1..] {
        let v = value(r);
        if v > best.1 {
            best = (r, v);
        }
    }
    best
}

/// Gaussian evaluation of the rate-equivocation outer bound: jointly
/// Gaussian inputs with variances (q1, P2), q1 <= P1, and correlation rho,
/// maximized over both. `rho_step` controls an additional full-power rho
/// scan kept as candidate points alongside the exact per-q1 solve.
pub fn outer_bound_gaussian<T: Scalar>(
    g: &ChannelGains<T>,
    rho_step: T,
) -> Result<StrategyResult<T>> {
    if !(rho_step > T::zero()) || rho_step > T::one() {
        return Err(Error::Validation(format!("rho step must be in (0, 1], got {rho_step}")));
    }
    let one = T::one();

    // full-power rho grid (the classic evaluation) as baseline candidates
    let mut best_q = g.p1;
    let mut best_rho = -one;
    let mut best_v = bound_terms(g, g.p1, -one).value;
    let mut rho = -one;
    while rho < one {
        let v = bound_terms(g, g.p1, rho).value;
        if v > best_v {
            best_v = v;
            best_rho = rho;
        }
        rho = rho + rho_step;
    }
    let v_end = bound_terms(g, g.p1, one).value;
    if v_end > best_v {
        best_v = v_end;
        best_rho = one;
    }

    // q1 grid with refinement, exact rho solve per grid point
    let res = 101usize;
    let levels = 3usize;
    let mut lo = T::zero();
    let mut hi = g.p1;
    for _ in 0..levels {
        let denom = T::from_usize(res - 1).unwrap();
        for j in 0..res {
            let q1 = if j == res - 1 {
                hi
            } else {
                lo + (hi - lo) * (T::from_usize(j).unwrap() / denom)
            };
            let (r, v) = bound_best_rho(g, q1);
            if v > best_v {
                best_v = v;
                best_rho = r;
                best_q = q1;
            }
        }
        let width = hi - lo;
        if width == T::zero() {
            break;
        }
        let spacing = width / T::from_usize(res - 1).unwrap();
        lo = (best_q - spacing).max(T::zero());
        hi = (best_q + spacing).min(g.p1);
    }

    let t = bound_terms(g, best_q, best_rho);
    let r1_bound = t.t1.min(t.t2);
    let pre = r1_bound.min(t.t1 - t.t3);
    let result = StrategyResult::from_pre_clamp(
        Strategy::OuterBound,
        pre,
        vec![("rho".into(), best_rho), ("q1".into(), best_q)],
        vec![
            ("i_inputs_destination".into(), t.t1),
            ("i_source_relay_outputs_given_v2".into(), t.t2),
            ("i_inputs_eavesdropper".into(), t.t3),
            ("r1_bound".into(), r1_bound),
        ],
    );
    debug_assert!((result.rate - best_v).abs() <= T::from_f64_lossy(1e-12));
    Ok(result)
}

/// Mean and 95% half-width of a phase-averaged strategy.
#[derive(Debug, Clone)]
pub struct McAverage<T> {
    pub result: StrategyResult<T>,
    pub half_width: T,
    pub draws: usize,
}

/// Phase-averaged DF or AF rate over explicit draws (the seeded entry point
/// is [`mc_phase_average`]; passing all-zero draws reproduces the real
/// model exactly).
pub fn mc_phase_average_over<T: Scalar>(
    draws: &[PhaseDraw<T>],
    strategy: Strategy,
    template: &ChannelGains<T>,
    settings: &GridSearchSettings,
) -> Result<McAverage<T>> {
    if !matches!(strategy, Strategy::Df | Strategy::Af) {
        return Err(Error::Contract(format!(
            "{strategy} is phase-invariant (its rate depends on gain magnitudes only); \
             phase averaging applies to df and af"
        )));
    }
    if draws.len() < 2 {
        return Err(Error::Validation("need at least 2 phase draws".into()));
    }
    let rates: Vec<T> = draws
        .par_iter()
        .map(|d| {
            let g = template.with_eavesdropper_phases(d);
            match strategy {
                Strategy::Df => df_rate(&g, settings).map(|r| r.rate),
                Strategy::Af => af_rate(&g, settings).map(|r| r.rate),
                _ => unreachable!(),
            }
        })
        .collect::<Result<Vec<T>>>()?;

    let n = T::from_usize(rates.len()).unwrap();
    let mut mean = T::zero();
    for &r in &rates {
        mean += r;
    }
    mean /= n;
    let mut ss = T::zero();
    for &r in &rates {
        ss += (r - mean) * (r - mean);
    }
    let var = ss / (n - T::one());
    let half_width = T::from_f64_lossy(1.96) * (var / n).sqrt();

    let mut result = StrategyResult::from_pre_clamp(
        strategy,
        mean,
        vec![],
        vec![("mean".into(), mean), ("half_width_95".into(), half_width)],
    );
    result.note = Some(format!("phase-averaged over {} draws", rates.len()));
    Ok(McAverage { result, half_width, draws: rates.len() })
}

/// Seeded phase-fading Monte-Carlo average of DF or AF: per draw the
/// eavesdropper-side links pick up uniform phases while destination-side
/// links stay aligned, the strategy is re-optimized, and the sample mean
/// and 95% normal-approximation half-width are reported.
pub fn mc_phase_average<T: Scalar>(
    strategy: Strategy,
    topology: &Topology<T>,
    template: &ChannelGains<T>,
    draws: usize,
    seed: u64,
    settings: &GridSearchSettings,
) -> Result<McAverage<T>> {
    if topology.phase_model != PhaseModel::UniformPhase {
        return Err(Error::Contract(
            "phase averaging requires the uniform-phase model".into(),
        ));
    }
    let phases = crate::channel::sample_phases::<T>(seed, draws);
    mc_phase_average_over(&phases, strategy, template, settings)
}
