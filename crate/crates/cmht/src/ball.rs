//! Midpoint-radius ball arithmetic with exact dyadic rational centers.
//!
//! Every operation returns a ball that contains the exact result of applying
//! the operation to any points of the input balls.

use crate::linalg::{q, Q, Z};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct RBall {
    pub mid: Q,
    pub rad: Q,
}

#[derive(Clone, Debug)]
pub struct CBall {
    pub re: RBall,
    pub im: RBall,
}

fn pow2(bits: u32) -> Q {
    Q::from_integer(Z::one() << bits)
}

/// Round `x` to a multiple of 2^-prec, returning the rounded value and an upper
/// bound for the error.
fn round_dyadic(x: &Q, prec: u32) -> (Q, Q) {
    if x.denom() <= &(Z::one() << prec) {
        return (x.clone(), Q::zero());
    }
    let s = pow2(prec);
    let r = Q::new((x * &s).round().to_integer(), Z::one() << prec);
    (r, s.recip())
}

impl RBall {
    pub fn exact(x: Q) -> Self {
        RBall { mid: x, rad: Q::zero() }
    }
    pub fn zero() -> Self {
        Self::exact(Q::zero())
    }
    pub fn lo(&self) -> Q {
        &self.mid - &self.rad
    }
    pub fn hi(&self) -> Q {
        &self.mid + &self.rad
    }
    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }
    /// Sign if the ball excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo() > Q::zero() {
            Some(Ordering::Greater)
        } else if self.hi() < Q::zero() {
            Some(Ordering::Less)
        } else {
            None
        }
    }
    pub fn add(&self, o: &RBall) -> RBall {
        RBall { mid: &self.mid + &o.mid, rad: &self.rad + &o.rad }
    }
    pub fn sub(&self, o: &RBall) -> RBall {
        RBall { mid: &self.mid - &o.mid, rad: &self.rad + &o.rad }
    }
    pub fn neg(&self) -> RBall {
        RBall { mid: -self.mid.clone(), rad: self.rad.clone() }
    }
    pub fn mul(&self, o: &RBall) -> RBall {
        RBall {
            mid: &self.mid * &o.mid,
            rad: self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad,
        }
    }
    pub fn scale(&self, c: &Q) -> RBall {
        RBall { mid: &self.mid * c, rad: &self.rad * c.abs() }
    }
    /// Reciprocal; `None` if the ball contains zero.
    pub fn recip(&self) -> Option<RBall> {
        let m = self.mid.abs();
        if m <= self.rad {
            return None;
        }
        let low = &m - &self.rad;
        Some(RBall { mid: self.mid.recip(), rad: &self.rad / (&m * &low) })
    }
    pub fn div(&self, o: &RBall) -> Option<RBall> {
        Some(self.mul(&o.recip()?))
    }
    /// Round the center to `prec` bits after the binary point, keeping containment.
    pub fn round(&self, prec: u32) -> RBall {
        let (m, e) = round_dyadic(&self.mid, prec);
        let (r, _) = round_dyadic(&(&self.rad + e), prec);
        // rounding the radius may shrink it; pad by one ulp
        let r = if r.is_zero() && self.rad.is_zero() && m == self.mid {
            r
        } else {
            r + pow2(prec).recip()
        };
        RBall { mid: m, rad: r }
    }
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.mid.to_f64().unwrap_or(f64::NAN)
    }
}

impl CBall {
    pub fn exact(re: Q, im: Q) -> Self {
        CBall { re: RBall::exact(re), im: RBall::exact(im) }
    }
    pub fn from_real(r: RBall) -> Self {
        CBall { re: r, im: RBall::zero() }
    }
    pub fn zero() -> Self {
        Self::exact(Q::zero(), Q::zero())
    }
    pub fn one() -> Self {
        Self::exact(q(1), Q::zero())
    }
    pub fn add(&self, o: &CBall) -> CBall {
        CBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    pub fn sub(&self, o: &CBall) -> CBall {
        CBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    pub fn neg(&self) -> CBall {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }
    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: self.im.neg() }
    }
    pub fn mul(&self, o: &CBall) -> CBall {
        CBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    pub fn scale(&self, c: &Q) -> CBall {
        CBall { re: self.re.scale(c), im: self.im.scale(c) }
    }
    /// Squared modulus as a real ball.
    pub fn norm2(&self) -> RBall {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    pub fn recip(&self) -> Option<CBall> {
        let n = self.norm2().recip()?;
        let c = self.conj();
        Some(CBall { re: c.re.mul(&n), im: c.im.mul(&n) })
    }
    pub fn div(&self, o: &CBall) -> Option<CBall> {
        Some(self.mul(&o.recip()?))
    }
    pub fn round(&self, prec: u32) -> CBall {
        CBall { re: self.re.round(prec), im: self.im.round(prec) }
    }
    /// Upper bound for the modulus of any point of the ball.
    pub fn abs_upper(&self) -> Q {
        self.re.mid.abs() + self.im.mid.abs() + &self.re.rad + &self.im.rad
    }
    /// Lower bound for the modulus of any point of the ball (possibly zero).
    pub fn abs_lower(&self) -> Q {
        let a = (self.re.mid.abs() - &self.re.rad).max(Q::zero());
        let b = (self.im.mid.abs() - &self.im.rad).max(Q::zero());
        a.max(b)
    }
    pub fn max_rad(&self) -> Q {
        self.re.rad.clone().max(self.im.rad.clone())
    }
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
    pub fn overlaps(&self, o: &CBall) -> bool {
        let dr = (&self.re.mid - &o.re.mid).abs();
        let di = (&self.im.mid - &o.im.mid).abs();
        dr <= &self.re.rad + &o.re.rad && di <= &self.im.rad + &o.im.rad
    }
}

/// A real number as a rational with its decimal rendering to `digits` places.
pub fn q_to_decimal(x: &Q, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = num_traits::pow(Z::from(10), digits);
    let v = (a * Q::from_integer(scale.clone())).round().to_integer();
    let ip = &v / &scale;
    let fp = &v % &scale;
    let mut fs = fp.to_string();
    while fs.len() < digits {
        fs.insert(0, '0');
    }
    let s = if digits == 0 { ip.to_string() } else { format!("{}.{}", ip, fs) };
    if neg && !v.is_zero() {
        format!("-{}", s)
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qf;

    #[test]
    fn recip_contains_exact() {
        let b = RBall { mid: q(3), rad: qf(1, 10) };
        let r = b.recip().unwrap();
        assert!(r.lo() <= qf(10, 31) && r.hi() >= qf(10, 29));
    }

    #[test]
    fn rounding_keeps_point() {
        let b = RBall::exact(qf(1, 3));
        let r = b.round(20);
        assert!(r.lo() <= qf(1, 3) && r.hi() >= qf(1, 3));
    }

    #[test]
    fn decimal_render() {
        assert_eq!(q_to_decimal(&qf(-1, 2), 3), "-0.500");
        assert_eq!(q_to_decimal(&qf(22, 7), 2), "3.14");
    }
}
