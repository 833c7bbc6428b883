//! Real-rational SISO transfer functions and the feedback-loop block algebra.
//!
//! Coefficients are stored in descending powers of `s`. Rational products are
//! plain coefficient convolutions; the only reductions performed are the
//! structural cancellations in [`lfr_blocks_sensitivity`], which are exact at
//! the coefficient level and keep the pole sets minimal for classification.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtiError {
    #[error("denominator polynomial is identically zero")]
    ZeroDenominator,
    #[error("evaluation at pole")]
    EvalAtPole,
    #[error("improper transfer function cannot be realized")]
    Improper,
    #[error("LTI closed loop unstable; SRG analysis for unstable P_zw out of scope")]
    UnstableClosedLoop,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransferFunction {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

/// Pole census of a denominator polynomial, split at the bands
/// `Re < -1e-9` (stable), `|Re| and |Im| < 1e-9` (integrator), rest unstable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PoleClass {
    pub stable_poles: usize,
    pub integrators: usize,
    pub unstable_poles: usize,
}

impl PoleClass {
    pub fn is_strictly_stable(&self) -> bool {
        self.integrators == 0 && self.unstable_poles == 0
    }

    /// Stable up to integrators, the widest class the gain bounds admit.
    pub fn is_stable_or_integrator(&self) -> bool {
        self.unstable_poles == 0
    }
}

/// Controllable-canonical (phase variable) realization; `order() == 0` for
/// static gains.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl TransferFunction {
    pub fn new(num: &[f64], den: &[f64]) -> Result<Self, LtiError> {
        let num = trim_leading(num);
        let den = trim_leading(den);
        if den.is_empty() {
            return Err(LtiError::ZeroDenominator);
        }
        let num = if num.is_empty() { vec![0.0] } else { num };
        Ok(Self { num, den })
    }

    pub fn constant(k: f64) -> Self {
        Self { num: vec![k], den: vec![1.0] }
    }

    pub fn num_degree(&self) -> usize {
        self.num.len() - 1
    }

    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    pub fn is_proper(&self) -> bool {
        self.num.len() <= self.den.len()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.num.len() < self.den.len() || self.num == [0.0]
    }

    /// `G(s)` as `|s| -> inf`: leading-coefficient ratio for biproper, 0 for
    /// strictly proper. Callers guarantee properness.
    pub fn limit_at_infinity(&self) -> f64 {
        if self.num.len() == self.den.len() {
            self.num[0] / self.den[0]
        } else {
            0.0
        }
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64, LtiError> {
        let (n, _) = horner(&self.num, s);
        let (d, d_mag) = horner(&self.den, s);
        // relative cancellation test: d_mag bounds |d| from above termwise
        if d.norm() <= 1e-12 * d_mag {
            return Err(LtiError::EvalAtPole);
        }
        Ok(n / d)
    }

    pub fn eval_jw(&self, omega: f64) -> Result<Complex64, LtiError> {
        self.eval(Complex64::new(0.0, omega))
    }

    pub fn classify_poles(&self) -> PoleClass {
        classify_roots(&polynomial_roots(&self.den))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { num: self.num.iter().map(|c| c * k).collect(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { num: conv(&self.num, &other.num), den: conv(&self.den, &other.den) }
    }

    pub fn realize(&self) -> Result<StateSpace, LtiError> {
        if !self.is_proper() {
            return Err(LtiError::Improper);
        }
        let lead = self.den[0];
        let n = self.den_degree();
        let a_coef: Vec<f64> = self.den[1..].iter().map(|c| c / lead).collect();
        let mut b_coef = vec![0.0; self.den.len() - self.num.len()];
        b_coef.extend(self.num.iter().map(|c| c / lead));
        let d = b_coef[0];
        // numerator of the strictly proper remainder, descending powers
        let rem: Vec<f64> = (0..n).map(|k| b_coef[k + 1] - d * a_coef[k]).collect();
        let a = DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == n {
                -a_coef[n - 1 - j]
            } else if j == i + 1 {
                1.0
            } else {
                0.0
            }
        });
        let b = DVector::from_fn(n, |i, _| if i + 1 == n { 1.0 } else { 0.0 });
        let c = RowDVector::from_fn(n, |_, j| rem[n - 1 - j]);
        Ok(StateSpace { a, b, c, d })
    }
}

impl StateSpace {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let n = self.order();
        if n == 0 {
            return Complex64::new(self.d, 0.0);
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { s } else { Complex64::new(0.0, 0.0) };
            diag - Complex64::new(self.a[(i, j)], 0.0)
        });
        let rhs = DVector::from_fn(n, |i, _| Complex64::new(self.b[i], 0.0));
        let x = m.lu().solve(&rhs).expect("resolvent is singular at this s");
        let mut acc = Complex64::new(self.d, 0.0);
        for i in 0..n {
            acc += self.c[i] * x[i];
        }
        acc
    }

    pub fn derivative(&self, x: &DVector<f64>, u: f64) -> DVector<f64> {
        &self.a * x + &self.b * u
    }

    pub fn output(&self, x: &DVector<f64>, u: f64) -> f64 {
        let mut acc = self.d * u;
        for i in 0..self.order() {
            acc += self.c[i] * x[i];
        }
        acc
    }
}

/// Four LTI blocks of a loop LFR, named by the signal pair they connect:
/// `p_zw` closes over the nonlinearity, `p_out_in` is the direct path.
#[derive(Clone, Debug)]
pub struct LoopBlocks {
    pub p_zw: TransferFunction,
    pub p_out_w: TransferFunction,
    pub p_z_in: TransferFunction,
    pub p_out_in: TransferFunction,
}

/// Sensitivity-loop blocks for plant `g` and controller `k`:
/// `(-S g, S g, S g k, S)` with `S = 1/(1 + g k)`, all reduced onto the
/// closed-loop denominator so pole classification sees no phantom factors.
pub fn lfr_blocks_sensitivity(
    g: &TransferFunction,
    k: &TransferFunction,
) -> Result<LoopBlocks, LtiError> {
    let den_cl = closed_loop_denominator(g, k)?;
    let ng_dk = conv(&g.num, &k.den);
    Ok(LoopBlocks {
        p_zw: TransferFunction::new(&neg_coeffs(&ng_dk), &den_cl)?,
        p_out_w: TransferFunction::new(&ng_dk, &den_cl)?,
        p_z_in: TransferFunction::new(&conv(&g.num, &k.num), &den_cl)?,
        p_out_in: TransferFunction::new(&conv(&g.den, &k.den), &den_cl)?,
    })
}

/// Loop-transfer blocks `(-g, -g, g k, g k)`. The closed loop must still be
/// stable for the analysis to describe a running feedback system.
pub fn lfr_blocks_looptransfer(
    g: &TransferFunction,
    k: &TransferFunction,
) -> Result<LoopBlocks, LtiError> {
    closed_loop_denominator(g, k)?;
    let l = g.mul(k);
    Ok(LoopBlocks { p_zw: g.neg(), p_out_w: g.neg(), p_z_in: l.clone(), p_out_in: l })
}

fn closed_loop_denominator(
    g: &TransferFunction,
    k: &TransferFunction,
) -> Result<Vec<f64>, LtiError> {
    let den_cl = poly_add(&conv(&g.den, &k.den), &conv(&g.num, &k.num));
    let class = classify_roots(&polynomial_roots(&den_cl));
    if !class.is_strictly_stable() {
        return Err(LtiError::UnstableClosedLoop);
    }
    Ok(den_cl)
}

/// Roots via the companion matrix of the trimmed polynomial; empty for
/// constants.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let c = trim_leading(coeffs);
    if c.len() <= 1 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[0];
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[j + 1] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().copied().collect()
}

fn classify_roots(roots: &[Complex64]) -> PoleClass {
    let mut class = PoleClass::default();
    for r in roots {
        if r.re.abs() < 1e-9 && r.im.abs() < 1e-9 {
            class.integrators += 1;
        } else if r.re < -1e-9 {
            class.stable_poles += 1;
        } else {
            class.unstable_poles += 1;
        }
    }
    class
}

fn horner(coeffs: &[f64], s: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let s_mag = s.norm();
    for &c in coeffs {
        acc = acc * s + c;
        mag = mag * s_mag + c.abs();
    }
    (acc, mag)
}

pub(crate) fn conv(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, x) in a.iter().enumerate() {
        out[n - a.len() + i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[n - b.len() + i] += x;
    }
    out
}

fn neg_coeffs(a: &[f64]) -> Vec<f64> {
    a.iter().map(|c| -c).collect()
}

fn trim_leading(coeffs: &[f64]) -> Vec<f64> {
    let start = coeffs.iter().position(|c| *c != 0.0).unwrap_or(coeffs.len());
    coeffs[start..].to_vec()
}

/// DC-motor plant `(J s + b) / (s ((L s + R)(J s + b) + Km^2))` for the
/// default parameter set; the workhorse fixture of the test suite.
pub fn dc_motor_plant(j: f64, r: f64, l: f64, km: f64, b: f64) -> TransferFunction {
    let num = vec![j, b];
    let mut den = poly_add(&conv(&[l, r], &[j, b]), &[km * km]);
    den.push(0.0);
    TransferFunction { num, den }
}

/// Lead-lag controller `5 (s + 1) / (s/10 + 1)` used throughout the examples.
pub fn dc_motor_controller() -> TransferFunction {
    TransferFunction { num: vec![5.0, 5.0], den: vec![0.1, 1.0] }
}

pub fn dc_motor_default_plant() -> TransferFunction {
    dc_motor_plant(0.1, 0.96, 1.0, 0.2, 1.0044)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    fn complex_eq(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn integrator_at_j_is_minus_j() {
        let g = TransferFunction::new(&[1.0], &[1.0, 0.0]).unwrap();
        complex_eq(g.eval_jw(1.0).unwrap(), Complex64::new(0.0, -1.0), 1e-15);
    }

    #[test]
    fn dc_motor_plant_matches_pinned_values() {
        let g = dc_motor_default_plant();
        assert_eq!(g.den, vec![0.1, 1.1004, 1.004224, 0.0]);
        complex_eq(
            g.eval_jw(1.0).unwrap(),
            Complex64::new(-5.00280383818057284e-01, -5.01967947816702176e-01),
            1e-14,
        );
        complex_eq(
            g.eval(Complex64::new(2.0, 3.0)).unwrap(),
            Complex64::new(-1.28659961430271259e-02, -6.42775049484299171e-02),
            1e-15,
        );
    }

    #[test]
    fn controller_dc_value_is_the_gain() {
        let k = dc_motor_controller();
        complex_eq(k.eval(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(5.0, 0.0), 1e-15);
    }

    #[test]
    fn eval_at_pole_is_rejected() {
        let g = TransferFunction::new(&[1.0], &[1.0, 0.0]).unwrap();
        assert_eq!(g.eval(Complex64::new(0.0, 0.0)), Err(LtiError::EvalAtPole));
        let h = TransferFunction::new(&[1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(h.eval(Complex64::new(-1.0, 0.0)), Err(LtiError::EvalAtPole));
    }

    #[test]
    fn conjugate_symmetry_at_random_points() {
        let g = dc_motor_default_plant();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let s = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
            let a = g.eval(s).unwrap();
            let b = g.eval(s.conj()).unwrap();
            complex_eq(a.conj(), b, 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn pole_classification_bands() {
        let integ = TransferFunction::new(&[1.0], &[1.0, 0.0]).unwrap();
        assert_eq!(
            integ.classify_poles(),
            PoleClass { stable_poles: 0, integrators: 1, unstable_poles: 0 }
        );
        let unstable = TransferFunction::new(&[1.0], &[1.0, -1.0]).unwrap();
        assert_eq!(unstable.classify_poles().unstable_poles, 1);
        let g = dc_motor_default_plant();
        let class = g.classify_poles();
        assert_eq!(
            class,
            PoleClass { stable_poles: 2, integrators: 1, unstable_poles: 0 }
        );
        assert!(class.is_stable_or_integrator() && !class.is_strictly_stable());
    }

    #[test]
    fn realize_first_order_lag() {
        let ss = TransferFunction::new(&[1.0], &[1.0, 1.0]).unwrap().realize().unwrap();
        assert_eq!(ss.a[(0, 0)], -1.0);
        assert_eq!(ss.b[0], 1.0);
        assert_eq!(ss.c[0], 1.0);
        assert_eq!(ss.d, 0.0);
    }

    #[test]
    fn realize_controller_feedthrough() {
        let k = dc_motor_controller();
        let ss = k.realize().unwrap();
        assert_abs_diff_eq!(ss.d, 50.0, epsilon = 1e-12);
        let hf = k.eval(Complex64::new(1e6, 0.0)).unwrap();
        assert_relative_eq!(hf.re, 50.0, max_relative = 1e-4);
    }

    #[test]
    fn realize_static_gain() {
        let ss = TransferFunction::constant(2.0).realize().unwrap();
        assert_eq!(ss.order(), 0);
        assert_eq!(ss.d, 2.0);
        assert_eq!(ss.output(&DVector::zeros(0), 3.0), 6.0);
    }

    #[test]
    fn realize_improper_fails() {
        let tf = TransferFunction::new(&[1.0, 0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(tf.realize(), Err(LtiError::Improper));
    }

    #[test]
    fn realization_round_trip() {
        let cases = [
            dc_motor_default_plant(),
            dc_motor_controller(),
            lfr_blocks_sensitivity(&dc_motor_default_plant(), &dc_motor_controller())
                .unwrap()
                .p_out_in,
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for tf in &cases {
            let ss = tf.realize().unwrap();
            for _ in 0..20 {
                let s = Complex64::new(rng.gen_range(0.0..2.0), rng.gen_range(0.2..50.0));
                let direct = tf.eval(s).unwrap();
                let via_ss = ss.eval(s);
                assert!(
                    (direct - via_ss).norm() <= 1e-8 * direct.norm().max(1e-3),
                    "mismatch at {s}: {direct} vs {via_ss}"
                );
            }
        }
    }

    #[test]
    fn sensitivity_blocks_first_order_by_hand() {
        let g = TransferFunction::new(&[1.0], &[1.0, 1.0]).unwrap();
        let k = TransferFunction::constant(1.0);
        let blocks = lfr_blocks_sensitivity(&g, &k).unwrap();
        assert_eq!(blocks.p_out_in.num, vec![1.0, 1.0]);
        assert_eq!(blocks.p_out_in.den, vec![1.0, 2.0]);
    }

    #[test]
    fn sensitivity_blocks_match_unreduced_evaluations() {
        let g = dc_motor_default_plant();
        let k = dc_motor_controller();
        let blocks = lfr_blocks_sensitivity(&g, &k).unwrap();
        complex_eq(
            blocks.p_out_in.eval_jw(1.0).unwrap(),
            Complex64::new(2.05795713488495131e-02, 1.99388840967091724e-01),
            1e-13,
        );
        complex_eq(
            blocks.p_out_w.eval_jw(1.0).unwrap(),
            Complex64::new(8.97912514645883009e-02, -1.10080611084983640e-01),
            1e-13,
        );
        complex_eq(
            blocks.p_z_in.eval_jw(1.0).unwrap(),
            Complex64::new(9.79420428651150532e-01, -1.99388840967091724e-01),
            1e-13,
        );
        let s2 = Complex64::new(0.7, -1.3);
        complex_eq(
            blocks.p_zw.eval(s2).unwrap(),
            Complex64::new(-6.13619542703078141e-02, -6.20375922995304446e-02),
            1e-14,
        );
    }

    #[test]
    fn sensitivity_block_identities() {
        let g = dc_motor_default_plant();
        let k = dc_motor_controller();
        let blocks = lfr_blocks_sensitivity(&g, &k).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let s = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..20.0));
            let zw = blocks.p_zw.eval(s).unwrap();
            let ew = blocks.p_out_w.eval(s).unwrap();
            let zr = blocks.p_z_in.eval(s).unwrap();
            complex_eq(ew, -zw, 1e-12 * (1.0 + ew.norm()));
            let kk = k.eval(s).unwrap();
            complex_eq(zr, -zw * kk, 1e-12 * (1.0 + zr.norm()));
        }
    }

    #[test]
    fn sensitivity_dc_value_vanishes_with_integrator() {
        let blocks =
            lfr_blocks_sensitivity(&dc_motor_default_plant(), &dc_motor_controller()).unwrap();
        let dc = blocks.p_out_in.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(dc.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_loop_poles_are_the_block_poles() {
        let blocks =
            lfr_blocks_sensitivity(&dc_motor_default_plant(), &dc_motor_controller()).unwrap();
        let class = blocks.p_zw.classify_poles();
        assert_eq!(
            class,
            PoleClass { stable_poles: 4, integrators: 0, unstable_poles: 0 }
        );
        let roots = polynomial_roots(&blocks.p_zw.den);
        let expected = [
            Complex64::new(-10.0436158706787123, 0.0),
            Complex64::new(-0.9990737796876509, 0.0),
            Complex64::new(-4.9806551748168184, 5.0240762392636809),
            Complex64::new(-4.9806551748168184, -5.0240762392636809),
        ];
        for e in expected {
            assert!(
                roots.iter().any(|r| (r - e).norm() < 1e-6),
                "missing closed-loop pole {e}"
            );
        }
    }

    #[test]
    fn unstable_closed_loop_is_rejected() {
        // positive feedback through the same plant: 1 + G*(-K) has RHP zeros
        let g = dc_motor_default_plant();
        let k = dc_motor_controller().neg();
        assert!(matches!(
            lfr_blocks_sensitivity(&g, &k),
            Err(LtiError::UnstableClosedLoop)
        ));
        assert!(matches!(
            lfr_blocks_looptransfer(&g, &k),
            Err(LtiError::UnstableClosedLoop)
        ));
    }

    #[test]
    fn looptransfer_blocks_shape() {
        let g = dc_motor_default_plant();
        let k = dc_motor_controller();
        let blocks = lfr_blocks_looptransfer(&g, &k).unwrap();
        let s = Complex64::new(0.0, 2.0);
        let gv = g.eval(s).unwrap();
        let kv = k.eval(s).unwrap();
        complex_eq(blocks.p_zw.eval(s).unwrap(), -gv, 1e-13);
        complex_eq(blocks.p_out_in.eval(s).unwrap(), gv * kv, 1e-13);
    }
}
