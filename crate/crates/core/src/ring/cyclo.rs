use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Element of Q(ζ) with ζ = exp(iπ/6), stored in the power basis {1, ζ, ζ², ζ³}.
///
/// The minimal polynomial of ζ is t⁴ − t² + 1, so ζ⁴ = ζ² − 1 and ζ⁶ = −1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloNum {
    coords: [BigRational; 4],
}

impl CycloNum {
    pub fn new(coords: [BigRational; 4]) -> Self {
        CycloNum { coords }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        CycloNum {
            coords: c.map(|v| BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycloNum {
            coords: [r, BigRational::zero(), BigRational::zero(), BigRational::zero()],
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// Some(q) when the value lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloNum {
            coords: [
                &self.coords[0] * r,
                &self.coords[1] * r,
                &self.coords[2] * r,
                &self.coords[3] * r,
            ],
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &self.coords {
            acc += p * c.to_f64().unwrap_or(f64::NAN);
            p *= z;
        }
        acc
    }

    /// Complex conjugate: ζ ↦ ζ⁻¹ = ζ − ζ³.
    pub fn conj(&self) -> Self {
        let mut out = CycloNum::zero();
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                out += &cyclo_pow(-(k as i64)).scale(c);
            }
        }
        out
    }

    fn mul_ref(&self, rhs: &CycloNum) -> CycloNum {
        if let (Some(a), Some(b)) = (self.as_rational(), rhs.as_rational()) {
            return CycloNum::from_rational(a * b);
        }
        let mut c: [BigRational; 7] = Default::default();
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        // ζ⁶ = −1, ζ⁵ = ζ³ − ζ, ζ⁴ = ζ² − 1
        let [c0, c1, c2, c3, c4, c5, c6] = c;
        CycloNum {
            coords: [c0 - &c4 - c6, c1 - &c5, c2 + c4, c3 + c5],
        }
    }
}

/// Canonical A^k with A = ζ = exp(iπ/6); k is reduced mod 12.
pub fn cyclo_pow(k: i64) -> CycloNum {
    let k = k.rem_euclid(12);
    // ζ^0..ζ^5 in the power basis; ζ^(k+6) = −ζ^k.
    const BASE: [[i64; 4]; 6] = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [-1, 0, 1, 0],
        [0, -1, 0, 1],
    ];
    let b = BASE[(k % 6) as usize];
    let s = if k >= 6 { -1 } else { 1 };
    CycloNum::from_ints(b.map(|v| v * s))
}

impl Default for CycloNum {
    fn default() -> Self {
        CycloNum::zero()
    }
}

impl Add for CycloNum {
    type Output = CycloNum;
    fn add(mut self, rhs: CycloNum) -> CycloNum {
        self += &rhs;
        self
    }
}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        for (a, b) in self.coords.iter_mut().zip(rhs.coords.iter()) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl Sub for CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: CycloNum) -> CycloNum {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        let mut out = self.clone();
        out += &(-rhs.clone());
        out
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            coords: self.coords.map(|c| -c),
        }
    }
}

impl Mul for CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: CycloNum) -> CycloNum {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.mul_ref(rhs)
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloNum {
    /// Rationals print bare; otherwise `(c0 + c1*A + c2*A^2 + c3*A^3)` with zero parts omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", r);
        }
        let names = ["", "A", "A^2", "A^3"];
        let mut parts = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = if k == 0 {
                format!("{}", mag)
            } else if mag.is_one() {
                names[k].to_string()
            } else {
                format!("{}*{}", mag, names[k])
            };
            parts.push((sign, body));
        }
        let mut s = String::from("(");
        for (i, (sign, body)) in parts.iter().enumerate() {
            if i == 0 {
                if *sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {} ", sign));
            }
            s.push_str(body);
        }
        s.push(')');
        write!(f, "{}", s)
    }
}
