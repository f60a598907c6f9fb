//! Independent product of skew polynomials by term rewriting.
//!
//! A product of monomials is kept as a word of letters `f` (multiplication by
//! a coefficient function) and `U`. The rewrite rule `U f -> (f . eta) U` is
//! applied one letter at a time until every coefficient sits to the left of
//! every `U`; like terms are then collected. No iterate tables or closed-form
//! convolution are used, so this serves as a check on
//! [`SkewPoly::try_mul`](super::SkewPoly::try_mul).

use super::{CoefFn, SkewPoly};
use crate::error::Result;

#[derive(Clone)]
enum Letter {
    Coef(CoefFn),
    Shift,
}

/// Rewrites `word` into normal form `f U^k`.
fn normal_form(mut word: Vec<Letter>, eta: &[usize]) -> (CoefFn, usize) {
    // bubble each coefficient left past every shift
    loop {
        let pos = word
            .windows(2)
            .position(|w| matches!((&w[0], &w[1]), (Letter::Shift, Letter::Coef(_))));
        let Some(i) = pos else { break };
        let Letter::Coef(f) = word[i + 1].clone() else {
            unreachable!()
        };
        // U f = (f . eta) U
        word[i] = Letter::Coef(f.compose(eta));
        word[i + 1] = Letter::Shift;
    }
    let n = eta.len();
    let mut coef = CoefFn::constant(n, num_complex::Complex64::new(1.0, 0.0));
    let mut shifts = 0;
    for l in word {
        match l {
            Letter::Coef(f) => coef = coef.pointwise_mul(&f),
            Letter::Shift => shifts += 1,
        }
    }
    (coef, shifts)
}

fn monomial_word(f: &CoefFn, k: usize) -> Vec<Letter> {
    let mut w = vec![Letter::Coef(f.clone())];
    w.extend(std::iter::repeat_n(Letter::Shift, k));
    w
}

/// `p * q` computed by expanding every pair of monomials and rewriting.
pub fn rewrite_product(p: &SkewPoly, q: &SkewPoly) -> Result<SkewPoly> {
    p.check_same(q)?;
    let sys = p.system().clone();
    let eta = sys.map().to_vec();
    let mut acc = SkewPoly::zero(sys.clone());
    for (k, f) in p.coeffs().iter().enumerate() {
        for (j, g) in q.coeffs().iter().enumerate() {
            let mut word = monomial_word(f, k);
            word.extend(monomial_word(g, j));
            let (coef, deg) = normal_form(word, &eta);
            acc = acc.try_add(&SkewPoly::monomial(sys.clone(), coef, deg)?)?;
        }
    }
    Ok(acc)
}
