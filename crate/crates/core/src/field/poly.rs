//! Dense polynomials over F_3, coefficient of x^0 first. Only used to
//! validate moduli.

pub(crate) fn trim(p: &mut Vec<u8>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn inv3(c: u8) -> u8 {
    // 1 and 2 are their own inverses mod 3
    c
}

/// Remainder of `a` modulo nonzero `b`.
pub(crate) fn rem(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "remainder by zero polynomial");
    let db = b.len() - 1;
    let lead_inv = inv3(b[db]);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (r[r.len() - 1] * lead_inv) % 3;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + 3 * 3 - factor * c) % 3;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn gcd(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}
