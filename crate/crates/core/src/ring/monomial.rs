use std::fmt;
use std::ops::Mul;

/// The nine symbols a monomial can carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    U = 0,
    V = 1,
    W = 2,
    L = 3,
    M = 4,
    N = 5,
    P = 6,
    Q = 7,
    R = 8,
}

impl Tag {
    pub const ALL: [Tag; 9] = [
        Tag::U,
        Tag::V,
        Tag::W,
        Tag::L,
        Tag::M,
        Tag::N,
        Tag::P,
        Tag::Q,
        Tag::R,
    ];

    pub fn name(self) -> &'static str {
        ["u", "v", "w", "l", "m", "n", "e_p", "e_q", "e_r"][self as usize]
    }
}

/// Laurent monomial u^du v^dv w^dw l^el m^em n^en e_p^ep e_q^eq e_r^er.
///
/// Ordering is lexicographic on the exponent tuple (du, dv, dw, el, em, en, ep, eq, er).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TagMonomial {
    exps: [i32; 9],
}

impl TagMonomial {
    pub const ONE: TagMonomial = TagMonomial { exps: [0; 9] };

    pub fn from_exps(exps: [i32; 9]) -> Self {
        debug_assert!(exps[..3].iter().all(|&e| e >= 0), "u,v,w exponents must be non-negative");
        TagMonomial { exps }
    }

    pub fn single(tag: Tag, e: i32) -> Self {
        let mut exps = [0; 9];
        exps[tag as usize] = e;
        TagMonomial { exps }
    }

    /// Fourier-only monomial e_p^p e_q^q e_r^r.
    pub fn fourier(p: i32, q: i32, r: i32) -> Self {
        TagMonomial::from_exps([0, 0, 0, 0, 0, 0, p, q, r])
    }

    pub fn exps(&self) -> [i32; 9] {
        self.exps
    }

    pub fn get(&self, tag: Tag) -> i32 {
        self.exps[tag as usize]
    }

    pub fn du(&self) -> i32 {
        self.exps[0]
    }
    pub fn dv(&self) -> i32 {
        self.exps[1]
    }
    pub fn dw(&self) -> i32 {
        self.exps[2]
    }
    pub fn el(&self) -> i32 {
        self.exps[3]
    }
    pub fn em(&self) -> i32 {
        self.exps[4]
    }
    pub fn en(&self) -> i32 {
        self.exps[5]
    }
    pub fn ep(&self) -> i32 {
        self.exps[6]
    }
    pub fn eq(&self) -> i32 {
        self.exps[7]
    }
    pub fn er(&self) -> i32 {
        self.exps[8]
    }

    pub fn uvw(&self) -> (i32, i32, i32) {
        (self.exps[0], self.exps[1], self.exps[2])
    }

    pub fn lmn(&self) -> (i32, i32, i32) {
        (self.exps[3], self.exps[4], self.exps[5])
    }

    pub fn pqr(&self) -> (i32, i32, i32) {
        (self.exps[6], self.exps[7], self.exps[8])
    }

    /// Copy with the listed tags removed (set to 1).
    pub fn without(&self, tags: &[Tag]) -> Self {
        let mut exps = self.exps;
        for t in tags {
            exps[*t as usize] = 0;
        }
        TagMonomial { exps }
    }

    /// Inverse; only valid when u,v,w exponents are zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.exps[..3].iter().any(|&e| e != 0) {
            return None;
        }
        Some(TagMonomial {
            exps: self.exps.map(|e| -e),
        })
    }
}

impl Mul for TagMonomial {
    type Output = TagMonomial;
    fn mul(self, rhs: TagMonomial) -> TagMonomial {
        let mut exps = self.exps;
        for (a, b) in exps.iter_mut().zip(rhs.exps.iter()) {
            *a += b;
        }
        TagMonomial { exps }
    }
}

impl fmt::Debug for TagMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TagMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for t in Tag::ALL {
            let e = self.get(t);
            match e {
                0 => {}
                1 => parts.push(t.name().to_string()),
                _ => parts.push(format!("{}^{}", t.name(), e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_adds_exponents() {
        let a = TagMonomial::from_exps([2, 0, 0, 2, 0, 0, -1, 0, 0]);
        let b = TagMonomial::from_exps([0, 2, 0, 0, 2, 0, 1, 0, 0]);
        assert_eq!((a * b).exps(), [2, 2, 0, 2, 2, 0, 0, 0, 0]);
    }

    #[test]
    fn equality_needs_all_nine_exponents() {
        let a = TagMonomial::single(Tag::R, 1);
        let b = TagMonomial::single(Tag::R, 2);
        assert_ne!(a, b);
        assert_eq!(a, TagMonomial::fourier(0, 0, 1));
    }

    #[test]
    fn display_lists_nonzero_symbols() {
        let a = TagMonomial::from_exps([2, 0, 0, -2, 0, 0, 1, 0, 0]);
        assert_eq!(a.to_string(), "u^2 l^-2 e_p");
        assert_eq!(TagMonomial::ONE.to_string(), "1");
    }
}
