//! Exact coefficient rings: the integers and Z/m.
//!
//! Elements are carried as `i128`; `Ring::Mod(m)` keeps them reduced to
//! `0..m`. All arithmetic is checked — an overflow means the computation left
//! the design envelope and panics rather than silently wrapping.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Ring {
    /// The ring of integers.
    Int,
    /// Integers modulo m (m >= 2). Prime m gives the field F_m.
    Mod(u64),
}

pub type Coef = i128;

impl Ring {
    pub fn normalize(&self, c: Coef) -> Coef {
        match self {
            Ring::Int => c,
            Ring::Mod(m) => c.rem_euclid(*m as Coef),
        }
    }

    pub fn add(&self, a: Coef, b: Coef) -> Coef {
        self.normalize(a.checked_add(b).expect("coefficient overflow"))
    }

    pub fn sub(&self, a: Coef, b: Coef) -> Coef {
        self.normalize(a.checked_sub(b).expect("coefficient overflow"))
    }

    pub fn mul(&self, a: Coef, b: Coef) -> Coef {
        self.normalize(a.checked_mul(b).expect("coefficient overflow"))
    }

    pub fn neg(&self, a: Coef) -> Coef {
        self.normalize(-a)
    }

    pub fn is_zero(&self, a: Coef) -> bool {
        self.normalize(a) == 0
    }

    pub fn one(&self) -> Coef {
        self.normalize(1)
    }

    pub fn is_unit(&self, a: Coef) -> bool {
        match self {
            Ring::Int => a == 1 || a == -1,
            Ring::Mod(m) => gcd(self.normalize(a) as u64, *m) == 1,
        }
    }

    /// Multiplicative inverse of a unit; `None` if `a` is not a unit.
    pub fn inv(&self, a: Coef) -> Option<Coef> {
        match self {
            Ring::Int => match a {
                1 => Some(1),
                -1 => Some(-1),
                _ => None,
            },
            Ring::Mod(m) => {
                let a = self.normalize(a) as i128;
                let m = *m as i128;
                let (g, x, _) = ext_gcd(a, m);
                if g == 1 {
                    Some(x.rem_euclid(m))
                } else {
                    None
                }
            }
        }
    }

    /// Exact quotient a / b, or `None` when b does not divide a.
    pub fn div_exact(&self, a: Coef, b: Coef) -> Option<Coef> {
        match self {
            Ring::Int => {
                if b == 0 {
                    return None;
                }
                if a % b == 0 {
                    Some(a / b)
                } else {
                    None
                }
            }
            Ring::Mod(_) => self.inv(b).map(|bi| self.mul(a, bi)),
        }
    }

    /// The modulus when this ring is a prime field.
    pub fn char_prime(&self) -> Option<u64> {
        match self {
            Ring::Int => None,
            Ring::Mod(m) => is_prime(*m).then_some(*m),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
