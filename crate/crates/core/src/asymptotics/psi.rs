//! The composition map `psi_tau(z, s)` whose level set `psi = rho_k` traces
//! the dominant singularity of the bivariate generating function at `u = e^s`.

use super::jet::Jet;

/// `rho_k = 1 / (2 (k - 1))`, the radius of convergence of `F_k`.
pub fn rho(k: u32) -> f64 {
    1.0 / (2.0 * (k as f64 - 1.0))
}

/// Evaluates
///
/// ```text
/// u0(z, s)  = e^s z^(2 tau - 2) / (e^s z^(2 tau) - z^2 + 1)
/// v(z, s)   = 1 - z + u0 (z^2 + z^3 + z^4)
/// psi(z, s) = sqrt(u0) z / v
/// ```
///
/// with first and second partials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiEvaluator {
    pub k: u32,
    pub tau: u32,
}

/// `psi` and its ingredients at one point.
#[derive(Debug, Clone, Copy)]
pub struct PsiJets {
    pub u0: Jet,
    pub v: Jet,
    pub psi: Jet,
}

impl PsiEvaluator {
    pub fn new(k: u32, tau: u32) -> Self {
        PsiEvaluator { k, tau }
    }

    pub fn rho(&self) -> f64 {
        rho(self.k)
    }

    /// Denominator of `u0`.
    pub fn u0_denominator(&self, z: f64, s: f64) -> f64 {
        s.exp() * z.powi(2 * self.tau as i32) - z * z + 1.0
    }

    /// `v` with the `u0` denominator cleared; `psi` has a pole where it vanishes.
    pub fn v_numerator(&self, z: f64, s: f64) -> f64 {
        let t = self.tau as i32;
        self.u0_denominator(z, s) * (1.0 - z) + s.exp() * z.powi(2 * t - 2) * (z * z + z.powi(3) + z.powi(4))
    }

    pub fn jets(&self, z: f64, s: f64) -> PsiJets {
        let t = self.tau as i32;
        let zj = Jet::var_z(z);
        let es = Jet::var_s(s).exp();
        let u0 = es * zj.powi(2 * t - 2) / (es * zj.powi(2 * t) - zj.powi(2) + 1.0);
        let v = 1.0 - zj + u0 * (zj.powi(2) + zj.powi(3) + zj.powi(4));
        let psi = u0.sqrt() * zj / v;
        PsiJets { u0, v, psi }
    }

    /// `F(z, s) = psi(z, s) - rho_k` with partials.
    pub fn f(&self, z: f64, s: f64) -> Jet {
        self.jets(z, s).psi - self.rho()
    }

    /// Plain value of `psi`.
    pub fn psi(&self, z: f64, s: f64) -> f64 {
        let t = self.tau as i32;
        let es = s.exp();
        let u0 = es * z.powi(2 * t - 2) / (es * z.powi(2 * t) - z * z + 1.0);
        let v = 1.0 - z + u0 * (z * z + z.powi(3) + z.powi(4));
        u0.sqrt() * z / v
    }

    pub fn u0(&self, z: f64, s: f64) -> f64 {
        let t = self.tau as i32;
        let es = s.exp();
        es * z.powi(2 * t - 2) / self.u0_denominator(z, s)
    }
}

/// `w0(z) = z^(2 tau - 2) / (1 - z^2 + z^(2 tau))`.
pub fn w0(tau: u32, z: f64) -> f64 {
    let t = tau as i32;
    z.powi(2 * t - 2) / (1.0 - z * z + z.powi(2 * t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(rho(2), 0.5);
        assert_eq!(rho(3), 0.25);
        assert_eq!(rho(9), 0.0625);
    }

    #[test]
    fn u0_at_zero_shift_is_w0() {
        for tau in 3..=7 {
            let p = PsiEvaluator::new(3, tau);
            for z in [0.1, 0.2, 0.3] {
                assert!((p.u0(z, 0.0) - w0(tau, z)).abs() <= 1e-15 * w0(tau, z));
            }
        }
    }

    #[test]
    fn jet_value_matches_plain() {
        let p = PsiEvaluator::new(4, 5);
        for &(z, s) in &[(0.2, 0.0), (0.35, 0.05), (0.5, -0.08)] {
            let j = p.jets(z, s);
            assert!((j.psi.v - p.psi(z, s)).abs() < 1e-15);
            assert!((j.u0.v - p.u0(z, s)).abs() < 1e-15);
        }
    }

    #[test]
    fn v_numerator_consistent() {
        let p = PsiEvaluator::new(2, 3);
        let (z, s) = (0.45, 0.02);
        let v = p.jets(z, s).v.v;
        assert!((v * p.u0_denominator(z, s) - p.v_numerator(z, s)).abs() < 1e-14);
    }
}
