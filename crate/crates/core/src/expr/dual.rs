//! Second-order forward-mode dual numbers: a value carried with its first
//! and second derivative with respect to one variable.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Dual2 {
    pub const fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    pub const fn variable(v: f64) -> Self {
        Self { v, d1: 1.0, d2: 0.0 }
    }

    /// Chain rule for a scalar map `g` given `g(v)`, `g'(v)` and `g''(v)`.
    fn chain(self, g: f64, dg: f64, ddg: f64) -> Self {
        Self {
            v: g,
            d1: dg * self.d1,
            d2: ddg * self.d1 * self.d1 + dg * self.d2,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }

    pub fn tanh(self) -> Self {
        let th = self.v.tanh();
        let sech2 = 1.0 - th * th;
        self.chain(th, sech2, -2.0 * th * sech2)
    }

    /// `self^n` for a constant exponent.
    pub fn powf(self, n: f64) -> Self {
        if n == 0.0 {
            return Self::constant(1.0);
        }
        if n == 1.0 {
            return self;
        }
        let (g, dg, ddg) = if n.fract() == 0.0 && n.abs() <= i32::MAX as f64 {
            let k = n as i32;
            (
                self.v.powi(k),
                n * self.v.powi(k - 1),
                n * (n - 1.0) * self.v.powi(k - 2),
            )
        } else {
            (
                self.v.powf(n),
                n * self.v.powf(n - 1.0),
                n * (n - 1.0) * self.v.powf(n - 2.0),
            )
        };
        self.chain(g, dg, ddg)
    }

    /// General power with a varying exponent: `exp(e * ln(self))`.
    pub fn pow(self, e: Dual2) -> Self {
        if e.d1 == 0.0 && e.d2 == 0.0 {
            return self.powf(e.v);
        }
        (e * self.ln()).exp()
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.chain(1.0 / o.v, -1.0 / (o.v * o.v), 2.0 / (o.v * o.v * o.v));
        self * inv
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}
