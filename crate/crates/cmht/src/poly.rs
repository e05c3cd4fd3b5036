//! Dense univariate polynomials over Q (coefficients low degree first).

use crate::linalg::{q, Q};
use num_traits::{One, Zero};

pub fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[Q]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out: Vec<Q> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(a: &[Q], c: &Q) -> Vec<Q> {
    let mut out: Vec<Q> = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    add(a, &scale(b, &q(-1)))
}

pub fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Division with remainder; `b` must be nonzero.
pub fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r: Vec<Q> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut quo = vec![Q::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (i, bi) in b.iter().enumerate().take(db + 1) {
            let t = &c * bi;
            r[dr - db + i] -= t;
        }
        quo[dr - db] = c;
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

pub fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = p.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect();
    trim(&mut out);
    out
}

pub fn monic_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let l = x[d].clone();
        x = scale(&x, &l.recip());
    }
    x
}

pub fn pow(p: &[Q], e: usize) -> Vec<Q> {
    let mut out = vec![Q::one()];
    for _ in 0..e {
        out = mul(&out, p);
    }
    out
}

pub fn to_string(p: &[Q], var: &str) -> String {
    let mut terms = vec![];
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        let term = if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            mono
        } else if *c == q(-1) {
            format!("-{}", mono)
        } else {
            format!("{}*{}", c, mono)
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let a = vec![q(1), q(0), q(0), q(1)];
        let b = vec![q(1), q(1)];
        let (qq, r) = divrem(&a, &b);
        assert!(r.is_empty());
        assert_eq!(mul(&qq, &b), a);
    }

    #[test]
    fn gcd_of_coprime() {
        let g = monic_gcd(&[q(1), q(0), q(1)], &[q(1), q(1)]);
        assert_eq!(g, vec![q(1)]);
    }
}
