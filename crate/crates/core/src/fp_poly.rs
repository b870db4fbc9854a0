//! Dense polynomials over a prime field `F_l`, just enough for gcds and
//! square tests on cubics and quartics.

use num_bigint::BigInt;

use crate::arith::{pow_mod, rem_u64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FpPoly {
    /// Coefficients, constant term first, no trailing zeros.
    coeffs: Vec<u64>,
    ell: u64,
}

fn mul(a: u64, b: u64, ell: u64) -> u64 {
    ((a as u128 * b as u128) % ell as u128) as u64
}

fn inv(a: u64, ell: u64) -> u64 {
    pow_mod(a, ell - 2, ell)
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, ell: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= ell;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs, ell }
    }

    pub fn from_ints(coeffs: &[BigInt], ell: u64) -> Self {
        FpPoly::new(coeffs.iter().map(|c| rem_u64(c, ell)).collect(), ell)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul(acc, x, self.ell) + c) % self.ell)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul(c, i as u64 % self.ell, self.ell))
            .collect();
        FpPoly::new(coeffs, self.ell)
    }

    fn scale(&self, k: u64) -> Self {
        FpPoly::new(self.coeffs.iter().map(|&c| mul(c, k, self.ell)).collect(), self.ell)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => self.scale(inv(lead, self.ell)),
        }
    }

    pub fn rem(&self, divisor: &FpPoly) -> Self {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = inv(divisor.coeffs[dd], self.ell);
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let factor = mul(r[top], lead_inv, self.ell);
            let shift = top - dd;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                r[shift + i] = (r[shift + i] + self.ell - mul(factor, c, self.ell)) % self.ell;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        FpPoly::new(r, self.ell)
    }

    pub fn gcd(&self, other: &FpPoly) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Whether the polynomial is a constant times the square of a
    /// polynomial (the zero polynomial counts). `ell` must be odd.
    pub fn is_const_times_square(&self) -> bool {
        let Some(deg) = self.degree() else {
            return true;
        };
        if deg % 2 == 1 {
            return false;
        }
        let g = self.monic();
        let k = deg / 2;
        let half = inv(2, self.ell);
        // root = x^k + s_{k-1} x^{k-1} + ... + s_0, matched from the top
        let mut root = vec![0u64; k + 1];
        root[k] = 1;
        for i in 1..=k {
            let target = 2 * k - i;
            let mut rest = 0u64;
            for a in (k - i + 1)..k {
                let b = target - a;
                if b > k - i && b < k {
                    rest = (rest + mul(root[a], root[b], self.ell)) % self.ell;
                }
            }
            let diff = (g.coeff(target) + self.ell - rest) % self.ell;
            root[k - i] = mul(diff, half, self.ell);
        }
        let root = FpPoly::new(root, self.ell);
        root.square() == g
    }

    fn square(&self) -> Self {
        let mut out = vec![0u64; self.coeffs.len() * 2];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in self.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul(a, b, self.ell)) % self.ell;
            }
        }
        FpPoly::new(out, self.ell)
    }
}
