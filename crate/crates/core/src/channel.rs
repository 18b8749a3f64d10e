//! Channel representations: AWGN link gains derived from node geometry,
//! phase-fading draws, and finite-alphabet relay channels with the
//! degradedness predicate and the silent-relay wiretap reduction.

use crate::error::{Error, Result};
use crate::info::JointPmf;
use crate::scalar::Scalar;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The five link coefficients of the four-terminal channel plus the two
/// average power budgets (noise variance normalized to one).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGains<T> {
    pub h_sd: Complex<T>,
    pub h_sw: Complex<T>,
    pub h_sr: Complex<T>,
    pub h_rd: Complex<T>,
    pub h_rw: Complex<T>,
    pub p1: T,
    pub p2: T,
}

impl<T: Scalar> ChannelGains<T> {
    pub fn new(
        h_sd: Complex<T>,
        h_sw: Complex<T>,
        h_sr: Complex<T>,
        h_rd: Complex<T>,
        h_rw: Complex<T>,
        p1: T,
        p2: T,
    ) -> Result<Self> {
        for (name, h) in [
            ("h_sd", h_sd),
            ("h_sw", h_sw),
            ("h_sr", h_sr),
            ("h_rd", h_rd),
            ("h_rw", h_rw),
        ] {
            if !h.re.is_finite() || !h.im.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite")));
            }
        }
        if !(p1 >= T::zero()) || !(p2 >= T::zero()) || !p1.is_finite() || !p2.is_finite() {
            return Err(Error::Validation("powers must be finite and >= 0".into()));
        }
        Ok(Self { h_sd, h_sw, h_sr, h_rd, h_rw, p1, p2 })
    }

    /// Real nonnegative gains from magnitudes.
    pub fn from_magnitudes(sd: T, sw: T, sr: T, rd: T, rw: T, p1: T, p2: T) -> Result<Self> {
        let c = |m: T| Complex::new(m, T::zero());
        Self::new(c(sd), c(sw), c(sr), c(rd), c(rw), p1, p2)
    }

    pub fn with_powers(mut self, p1: T, p2: T) -> Result<Self> {
        if !(p1 >= T::zero()) || !(p2 >= T::zero()) {
            return Err(Error::Validation("powers must be >= 0".into()));
        }
        self.p1 = p1;
        self.p2 = p2;
        Ok(self)
    }

    /// Applies a phase draw to the eavesdropper-side links; destination-side
    /// links stay phase-compensated.
    pub fn with_eavesdropper_phases(&self, draw: &PhaseDraw<T>) -> Self {
        let rot = |h: Complex<T>, theta: T| h * Complex::new(theta.cos(), theta.sin());
        let mut g = self.clone();
        g.h_sw = rot(Complex::new(self.h_sw.norm(), T::zero()), draw.theta_sw);
        g.h_rw = rot(Complex::new(self.h_rw.norm(), T::zero()), draw.theta_rw);
        g
    }

    pub fn is_real(&self) -> bool {
        [self.h_sd, self.h_sw, self.h_sr, self.h_rd, self.h_rw]
            .iter()
            .all(|h| h.im == T::zero())
    }

    pub fn sd2(&self) -> T {
        self.h_sd.norm_sqr()
    }
    pub fn sw2(&self) -> T {
        self.h_sw.norm_sqr()
    }
    pub fn sr2(&self) -> T {
        self.h_sr.norm_sqr()
    }
    pub fn rd2(&self) -> T {
        self.h_rd.norm_sqr()
    }
    pub fn rw2(&self) -> T {
        self.h_rw.norm_sqr()
    }
}

/// Phase model for the link coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseModel {
    /// All coefficients real: h = d^(-gamma).
    Real,
    /// Destination-side phases compensated; eavesdropper-side phases i.i.d.
    /// uniform on [0, 2pi) per draw.
    UniformPhase,
}

/// Planar node layout with a power-law attenuation exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology<T> {
    pub source: [T; 2],
    pub destination: [T; 2],
    pub eavesdropper: [T; 2],
    pub relay: [T; 2],
    pub gamma: T,
    pub phase_model: PhaseModel,
    /// Distance floor; distances below it are clamped when `clamp` is set.
    pub d_min: T,
    pub clamp: bool,
}

impl<T: Scalar> Topology<T> {
    pub fn new(
        source: [T; 2],
        destination: [T; 2],
        eavesdropper: [T; 2],
        relay: [T; 2],
        gamma: T,
        phase_model: PhaseModel,
    ) -> Result<Self> {
        if !(gamma > T::one()) {
            return Err(Error::Validation(format!("gamma must be > 1, got {gamma}")));
        }
        Ok(Self {
            source,
            destination,
            eavesdropper,
            relay,
            gamma,
            phase_model,
            d_min: T::from_f64_lossy(1e-6),
            clamp: true,
        })
    }

    pub fn with_distance_floor(mut self, d_min: T, clamp: bool) -> Result<Self> {
        if !(d_min > T::zero()) {
            return Err(Error::Validation("d_min must be > 0".into()));
        }
        self.d_min = d_min;
        self.clamp = clamp;
        Ok(self)
    }

    pub fn relay_at(mut self, relay: [T; 2]) -> Self {
        self.relay = relay;
        self
    }
}

fn distance<T: Scalar>(a: [T; 2], b: [T; 2]) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Path-loss gains |h| = max(d, d_min)^(-gamma), all phases zero (the
/// uniform-phase model applies its draw separately via
/// [`ChannelGains::with_eavesdropper_phases`]). Powers are left at zero for
/// the caller to fill.
pub fn gains_from_topology<T: Scalar>(t: &Topology<T>) -> Result<ChannelGains<T>> {
    let links = [
        ("source-destination", t.source, t.destination),
        ("source-eavesdropper", t.source, t.eavesdropper),
        ("source-relay", t.source, t.relay),
        ("relay-destination", t.relay, t.destination),
        ("relay-eavesdropper", t.relay, t.eavesdropper),
    ];
    let mut mags = [T::zero(); 5];
    for (i, (name, a, b)) in links.iter().enumerate() {
        let d = distance(*a, *b);
        if d < t.d_min && !t.clamp {
            return Err(Error::Geometry(format!(
                "{name} distance {d} is below the floor {} and clamping is off",
                t.d_min
            )));
        }
        mags[i] = d.max(t.d_min).powf(-t.gamma);
    }
    ChannelGains::from_magnitudes(
        mags[0],
        mags[1],
        mags[2],
        mags[3],
        mags[4],
        T::zero(),
        T::zero(),
    )
}

/// One pair of eavesdropper-side phases in [0, 2pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDraw<T> {
    pub theta_sw: T,
    pub theta_rw: T,
}

/// Deterministic phase sequence: draw `i` comes from stream `i` of a
/// counter-based generator seeded with `seed`, so draws can be produced
/// independently and in parallel while staying byte-identical across runs.
pub fn sample_phases<T: Scalar>(seed: u64, n: usize) -> Vec<PhaseDraw<T>> {
    let tau = std::f64::consts::TAU;
    (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let a: f64 = rng.random::<f64>() * tau;
            let b: f64 = rng.random::<f64>() * tau;
            PhaseDraw { theta_sw: T::from_f64_lossy(a), theta_rw: T::from_f64_lossy(b) }
        })
        .collect()
}

/// Finite-alphabet relay-eavesdropper channel: transition tensor
/// t[x1][x2][y][y1][y2] = p(y, y1, y2 | x1, x2), stored x1-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayDmc<T> {
    pub nx1: usize,
    pub nx2: usize,
    pub ny: usize,
    pub ny1: usize,
    pub ny2: usize,
    probs: Vec<T>,
}

impl<T: Scalar> RelayDmc<T> {
    pub fn new(sizes: [usize; 5], probs: Vec<T>) -> Result<Self> {
        let [nx1, nx2, ny, ny1, ny2] = sizes;
        let total = nx1 * nx2 * ny * ny1 * ny2;
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::Validation("alphabet sizes must be >= 1".into()));
        }
        if probs.len() != total {
            return Err(Error::Validation(format!(
                "transition tensor has {} entries, sizes require {total}",
                probs.len()
            )));
        }
        let mut probs = probs;
        let slice = ny * ny1 * ny2;
        for x1 in 0..nx1 {
            for x2 in 0..nx2 {
                let base = (x1 * nx2 + x2) * slice;
                let mut sum = T::zero();
                for p in &probs[base..base + slice] {
                    if !p.is_finite() || *p < T::zero() {
                        return Err(Error::Validation(format!(
                            "invalid transition probability {p} at input ({x1},{x2})"
                        )));
                    }
                    sum += *p;
                }
                if (sum - T::one()).abs() > T::pmf_sum_tol() {
                    return Err(Error::Validation(format!(
                        "transition slice ({x1},{x2}) sums to {sum}, expected 1"
                    )));
                }
                if sum != T::one() {
                    for p in &mut probs[base..base + slice] {
                        *p /= sum;
                    }
                }
            }
        }
        Ok(Self { nx1, nx2, ny, ny1, ny2, probs })
    }

    pub fn sizes(&self) -> [usize; 5] {
        [self.nx1, self.nx2, self.ny, self.ny1, self.ny2]
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, x1: usize, x2: usize, y: usize, y1: usize, y2: usize) -> T {
        self.probs[(((x1 * self.nx2 + x2) * self.ny + y) * self.ny1 + y1) * self.ny2 + y2]
    }

    /// Joint distribution over (x1, x2, y, y1, y2) under the input law
    /// `p_in[x1 * nx2 + x2]`.
    pub fn joint(&self, p_in: &[T]) -> Result<JointPmf<T>> {
        if p_in.len() != self.nx1 * self.nx2 {
            return Err(Error::Validation("input law size mismatch".into()));
        }
        let mut out = Vec::with_capacity(self.probs.len());
        let slice = self.ny * self.ny1 * self.ny2;
        for (i, &pin) in p_in.iter().enumerate() {
            for t in &self.probs[i * slice..(i + 1) * slice] {
                out.push(pin * *t);
            }
        }
        JointPmf::new(
            vec![
                ("x1".into(), self.nx1),
                ("x2".into(), self.nx2),
                ("y".into(), self.ny),
                ("y1".into(), self.ny1),
                ("y2".into(), self.ny2),
            ],
            out,
        )
    }
}

/// Result of the reverse-degradedness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradednessReport<T> {
    pub reversely_degraded: bool,
    pub max_violation: T,
}

/// Tests whether p(y, y1 | x1, x2) factors as p(y | x1, x2) p(y1 | y, x2),
/// i.e. whether Y1 is conditionally independent of X1 given (Y, X2). The
/// reported violation is the largest absolute gap between the marginal and
/// its factored reconstruction (pooling p(y1 | y, x2) uniformly over x1).
pub fn is_reversely_degraded<T: Scalar>(c: &RelayDmc<T>, tol: T) -> DegradednessReport<T> {
    let m = |x1: usize, x2: usize, y: usize, y1: usize| -> T {
        let mut s = T::zero();
        for y2 in 0..c.ny2 {
            s += c.prob(x1, x2, y, y1, y2);
        }
        s
    };
    let mut max_violation = T::zero();
    for x2 in 0..c.nx2 {
        for y in 0..c.ny {
            // pooled conditional p(y1 | y, x2)
            let mut pooled = vec![T::zero(); c.ny1];
            let mut mass = T::zero();
            for x1 in 0..c.nx1 {
                for (y1, slot) in pooled.iter_mut().enumerate() {
                    *slot += m(x1, x2, y, y1);
                }
            }
            for p in &pooled {
                mass += *p;
            }
            if mass <= T::prob_floor() {
                continue;
            }
            for p in &mut pooled {
                *p /= mass;
            }
            for x1 in 0..c.nx1 {
                let mut py = T::zero();
                for y1 in 0..c.ny1 {
                    py += m(x1, x2, y, y1);
                }
                for (y1, q) in pooled.iter().enumerate() {
                    let gap = (m(x1, x2, y, y1) - py * *q).abs();
                    if gap > max_violation {
                        max_violation = gap;
                    }
                }
            }
        }
    }
    DegradednessReport { reversely_degraded: max_violation <= tol, max_violation }
}

/// Three-terminal channel p(y, y2 | x1) left after silencing the relay.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapDmc<T> {
    pub nx1: usize,
    pub ny: usize,
    pub ny2: usize,
    probs: Vec<T>,
}

impl<T: Scalar> WiretapDmc<T> {
    #[inline]
    pub fn prob(&self, x1: usize, y: usize, y2: usize) -> T {
        self.probs[(x1 * self.ny + y) * self.ny2 + y2]
    }

    /// Joint over (x1, y, y2) under the input pmf `px1`.
    pub fn joint(&self, px1: &[T]) -> Result<JointPmf<T>> {
        if px1.len() != self.nx1 {
            return Err(Error::Validation("input pmf size mismatch".into()));
        }
        let mut out = Vec::with_capacity(self.probs.len());
        let slice = self.ny * self.ny2;
        for (x1, &p) in px1.iter().enumerate() {
            for t in &self.probs[x1 * slice..(x1 + 1) * slice] {
                out.push(p * *t);
            }
        }
        JointPmf::new(
            vec![("x1".into(), self.nx1), ("y".into(), self.ny), ("y2".into(), self.ny2)],
            out,
        )
    }
}

/// Fixes the relay input at `x2_star` and marginalizes the relay output.
pub fn wiretap_reduction<T: Scalar>(c: &RelayDmc<T>, x2_star: usize) -> Result<WiretapDmc<T>> {
    if x2_star >= c.nx2 {
        return Err(Error::Validation(format!(
            "silent symbol {x2_star} out of range (|X2| = {})",
            c.nx2
        )));
    }
    let mut probs = vec![T::zero(); c.nx1 * c.ny * c.ny2];
    for x1 in 0..c.nx1 {
        for y in 0..c.ny {
            for y2 in 0..c.ny2 {
                let mut s = T::zero();
                for y1 in 0..c.ny1 {
                    s += c.prob(x1, x2_star, y, y1, y2);
                }
                probs[(x1 * c.ny + y) * c.ny2 + y2] = s;
            }
        }
    }
    Ok(WiretapDmc { nx1: c.nx1, ny: c.ny, ny2: c.ny2, probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig4_topology(x: f64) -> Topology<f64> {
        Topology::new(
            [0.0, 0.0],
            [1.0, 0.0],
            [0.0, 1.0],
            [x, 0.0],
            2.0,
            PhaseModel::Real,
        )
        .unwrap()
    }

    #[test]
    fn gains_relay_midway() {
        let g = gains_from_topology(&fig4_topology(0.5)).unwrap();
        assert_relative_eq!(g.h_sr.re, 4.0, epsilon = 1e-12);
        assert_relative_eq!(g.h_rd.re, 4.0, epsilon = 1e-12);
        assert_relative_eq!(g.h_sd.re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.h_sw.re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.h_rw.re, 0.8, epsilon = 1e-12);
        assert!(g.is_real());
    }

    #[test]
    fn gains_clamped_on_coincident_nodes() {
        let g = gains_from_topology(&fig4_topology(1.0)).unwrap();
        // relay sits on the destination: clamped by d_min = 1e-6
        assert_relative_eq!(g.h_rd.re, 1e12, max_relative = 1e-9);
    }

    #[test]
    fn coincident_nodes_error_when_clamp_disabled() {
        let t = fig4_topology(1.0).with_distance_floor(1e-6, false).unwrap();
        assert!(matches!(gains_from_topology(&t), Err(Error::Geometry(_))));
    }

    #[test]
    fn unit_distances_give_unit_gains() {
        // two equilateral triangles sharing the source-relay edge put every
        // used link (sd, sw, sr, rd, rw) at distance exactly 1
        let h = 3.0f64.sqrt() / 2.0;
        let t = Topology::new(
            [0.0, 0.0],
            [1.0, 0.0],
            [-0.5, h],
            [0.5, h],
            2.0,
            PhaseModel::Real,
        )
        .unwrap();
        let g = gains_from_topology(&t).unwrap();
        for h in [g.h_sd, g.h_sw, g.h_sr, g.h_rd, g.h_rw] {
            assert_relative_eq!(h.re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gains_scale_covariant() {
        let t = fig4_topology(0.3);
        let mut scaled = t.clone();
        let s = 2.5;
        for node in [
            &mut scaled.source,
            &mut scaled.destination,
            &mut scaled.eavesdropper,
            &mut scaled.relay,
        ] {
            node[0] *= s;
            node[1] *= s;
        }
        let g = gains_from_topology(&t).unwrap();
        let gs = gains_from_topology(&scaled).unwrap();
        let factor = s.powf(-2.0);
        for (a, b) in [
            (g.h_sd, gs.h_sd),
            (g.h_sw, gs.h_sw),
            (g.h_sr, gs.h_sr),
            (g.h_rd, gs.h_rd),
            (g.h_rw, gs.h_rw),
        ] {
            assert_relative_eq!(b.re, a.re * factor, max_relative = 1e-12);
        }
    }

    #[test]
    fn phases_deterministic_and_in_range() {
        let a: Vec<PhaseDraw<f64>> = sample_phases(42, 100);
        let b: Vec<PhaseDraw<f64>> = sample_phases(42, 100);
        assert_eq!(a, b);
        for d in &a {
            assert!((0.0..std::f64::consts::TAU).contains(&d.theta_sw));
            assert!((0.0..std::f64::consts::TAU).contains(&d.theta_rw));
        }
        let c: Vec<PhaseDraw<f64>> = sample_phases(43, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn phases_prefix_stable() {
        // stream-per-draw: the first draws do not depend on n
        let long: Vec<PhaseDraw<f64>> = sample_phases(7, 50);
        let short: Vec<PhaseDraw<f64>> = sample_phases(7, 3);
        assert_eq!(&long[..3], &short[..]);
    }

    #[test]
    fn phase_mean_cos_near_zero() {
        let n = 100_000;
        let draws: Vec<PhaseDraw<f64>> = sample_phases(2024, n);
        let mean = draws.iter().map(|d| d.theta_sw.cos()).sum::<f64>() / n as f64;
        // Var(cos theta) = 1/2, so 3 sigma = 3 sqrt(1/(2n))
        assert!(mean.abs() < 3.0 * (0.5 / n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn single_phase_draw() {
        let d: Vec<PhaseDraw<f64>> = sample_phases(0, 1);
        assert_eq!(d.len(), 1);
    }

    /// p(y|x1,x2) BSC-like composed with p(y1|y,x2): reversely degraded by
    /// construction.
    fn composed_degraded(eps: f64) -> RelayDmc<f64> {
        let py = |x1: usize, _x2: usize, y: usize| -> f64 {
            if y == x1 {
                0.9
            } else {
                0.1
            }
        };
        let py1 = |y: usize, x2: usize, y1: usize| -> f64 {
            let flip = if x2 == 0 { 0.2 } else { 0.35 };
            if y1 == y {
                1.0 - flip
            } else {
                flip
            }
        };
        let mut probs = vec![0.0; 2 * 2 * 2 * 2 * 2];
        let mut i = 0;
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y in 0..2 {
                    for y1 in 0..2 {
                        for y2 in 0..2 {
                            let base = py(x1, x2, y) * py1(y, x2, y1) * 0.5;
                            // perturb one cell to break the factorization
                            let bump = if eps != 0.0 && (x1, x2, y, y1, y2) == (0, 0, 0, 0, 0) {
                                eps
                            } else if eps != 0.0 && (x1, x2, y, y1, y2) == (0, 0, 0, 1, 0) {
                                -eps
                            } else {
                                0.0
                            };
                            probs[i] = base + bump;
                            i += 1;
                        }
                    }
                }
            }
        }
        RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap()
    }

    #[test]
    fn degraded_by_construction_detected() {
        let r = is_reversely_degraded(&composed_degraded(0.0), 1e-9);
        assert!(r.reversely_degraded, "violation {}", r.max_violation);
    }

    #[test]
    fn identity_relay_observation_not_degraded() {
        // y1 = x1 exactly, y pure noise
        let mut probs = vec![0.0; 32];
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y in 0..2 {
                    for y2 in 0..2 {
                        probs[(((x1 * 2 + x2) * 2 + y) * 2 + x1) * 2 + y2] = 0.25;
                    }
                }
            }
        }
        let c = RelayDmc::new([2, 2, 2, 2, 2], probs).unwrap();
        let r = is_reversely_degraded(&c, 1e-9);
        assert!(!r.reversely_degraded);
        assert!(r.max_violation > 0.1);
    }

    #[test]
    fn perturbed_degraded_reports_violation_scale() {
        let r = is_reversely_degraded(&composed_degraded(1e-3), 1e-6);
        assert!(!r.reversely_degraded);
        assert!(
            r.max_violation > 1e-4 && r.max_violation < 1e-2,
            "violation {}",
            r.max_violation
        );
    }

    #[test]
    fn wiretap_reduction_matches_index_arithmetic() {
        // deterministic pseudo-random tensor via an LCG, then slice by hand
        let mut state = 88172645463325252u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut probs = vec![0.0; 32];
        for chunk in probs.chunks_mut(8) {
            let mut s = 0.0;
            for p in chunk.iter_mut() {
                *p = next() + 1e-3;
                s += *p;
            }
            for p in chunk.iter_mut() {
                *p /= s;
            }
        }
        let c = RelayDmc::new([2, 2, 2, 2, 2], probs.clone()).unwrap();
        let w = wiretap_reduction(&c, 1).unwrap();
        for x1 in 0..2 {
            for y in 0..2 {
                for y2 in 0..2 {
                    let manual: f64 = (0..2).map(|y1| c.prob(x1, 1, y, y1, y2)).sum();
                    assert_relative_eq!(w.prob(x1, y, y2), manual, epsilon = 1e-15);
                }
            }
        }
        assert!(wiretap_reduction(&c, 2).is_err());
    }

    #[test]
    fn relay_dmc_rejects_bad_slices() {
        let mut probs = vec![0.0; 32];
        probs[0] = 0.5; // slice (0,0) sums to 0.5
        assert!(RelayDmc::new([2, 2, 2, 2, 2], probs).is_err());
    }

    #[test]
    fn joint_marginal_renormalizes() {
        let c = composed_degraded(0.0);
        let j = c.joint(&[0.25, 0.25, 0.25, 0.25]).unwrap();
        let m = j.marginalize(&["y", "y1"]).unwrap();
        let total: f64 = m.probs().iter().sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }
}
