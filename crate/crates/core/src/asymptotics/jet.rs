//! Second-order Taylor jets in two variables `(z, s)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value of a function together with its first and second partials in `z`
/// and `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub z: f64,
    pub s: f64,
    pub zz: f64,
    pub zs: f64,
    pub ss: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet { v, z: 0.0, s: 0.0, zz: 0.0, zs: 0.0, ss: 0.0 }
    }

    pub fn var_z(v: f64) -> Self {
        Jet { z: 1.0, ..Self::constant(v) }
    }

    pub fn var_s(v: f64) -> Self {
        Jet { s: 1.0, ..Self::constant(v) }
    }

    /// Chain rule for a scalar function with value `g0`, derivative `g1` and
    /// second derivative `g2` at `self.v`.
    fn lift(self, g0: f64, g1: f64, g2: f64) -> Self {
        Jet {
            v: g0,
            z: g1 * self.z,
            s: g1 * self.s,
            zz: g2 * self.z * self.z + g1 * self.zz,
            zs: g2 * self.z * self.s + g1 * self.zs,
            ss: g2 * self.s * self.s + g1 * self.ss,
        }
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.lift(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.lift(r, 0.5 / r, -0.25 / (r * self.v))
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.lift(e, e, e)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet::constant(1.0),
            1 => self,
            _ => {
                let x = self.v;
                let nf = n as f64;
                self.lift(x.powi(n), nf * x.powi(n - 1), nf * (nf - 1.0) * x.powi(n - 2))
            }
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            z: self.z + o.z,
            s: self.s + o.s,
            zz: self.zz + o.zz,
            zs: self.zs + o.zs,
            ss: self.ss + o.ss,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, z: -self.z, s: -self.s, zz: -self.zz, zs: -self.zs, ss: -self.ss }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            z: self.z * o.v + self.v * o.z,
            s: self.s * o.v + self.v * o.s,
            zz: self.zz * o.v + 2.0 * self.z * o.z + self.v * o.zz,
            zs: self.zs * o.v + self.z * o.s + self.s * o.z + self.v * o.zs,
            ss: self.ss * o.v + 2.0 * self.s * o.s + self.v * o.ss,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet { v: self.v + c, ..self }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet { v: self.v - c, ..self }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet { v: self.v * c, z: self.z * c, s: self.s * c, zz: self.zz * c, zs: self.zs * c, ss: self.ss * c }
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, j: Jet) -> Jet {
        j + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, j: Jet) -> Jet {
        -j + self
    }
}
