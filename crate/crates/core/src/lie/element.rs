use super::{Alphabet, GenId, Word};
use crate::linalg::Rational;
use crate::{Error, Result};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// An exact rational series of words over the generators, truncated at
/// bracket length `N`. Elements meant as Lie elements are the primitive
/// ones; [`LieElement::is_lie`] checks primitivity via the Dynkin operator.
#[derive(Clone)]
pub struct LieElement {
    alphabet: Arc<Alphabet>,
    truncation: usize,
    /// Sorted by word, lexicographically; no zero coefficients.
    terms: Vec<(Word, Rational)>,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        self.truncation == other.truncation
            && Alphabet::same(&self.alphabet, &other.alphabet)
            && self.terms == other.terms
    }
}
impl Eq for LieElement {}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl LieElement {
    pub fn zero(alphabet: Arc<Alphabet>, truncation: usize) -> Self {
        LieElement {
            alphabet,
            truncation,
            terms: Vec::new(),
        }
    }

    pub fn generator(alphabet: Arc<Alphabet>, truncation: usize, id: GenId) -> Self {
        let mut word = Word::new();
        word.push(id);
        LieElement {
            alphabet,
            truncation,
            terms: vec![(word, Rational::one())],
        }
    }

    pub fn generator_named(
        alphabet: &Arc<Alphabet>,
        truncation: usize,
        name: &str,
    ) -> Result<Self> {
        let id = alphabet.require(name)?;
        Ok(Self::generator(alphabet.clone(), truncation, id))
    }

    /// Builds an element from raw terms: sorts, merges duplicates, drops
    /// zeros and words longer than the truncation.
    pub fn from_terms(
        alphabet: Arc<Alphabet>,
        truncation: usize,
        mut terms: Vec<(Word, Rational)>,
    ) -> Self {
        terms.retain(|(w, c)| w.len() <= truncation && !w.is_empty() && !c.is_zero());
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Word, Rational)> = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            match merged.last_mut() {
                Some((lw, lc)) if *lw == w => *lc += c,
                _ => merged.push((w, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LieElement {
            alphabet,
            truncation,
            terms: merged,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn terms(&self) -> &[(Word, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, word: &[GenId]) -> Rational {
        match self.terms.binary_search_by(|(w, _)| w.as_slice().cmp(word)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn compatible(&self, other: &LieElement) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch(self.truncation, other.truncation));
        }
        if !Alphabet::same(&self.alphabet, &other.alphabet) {
            return Err(Error::AlphabetMismatch(
                "elements live over different generator sets".into(),
            ));
        }
        Ok(())
    }

    /// Homogeneous degree, if any. Zero has no degree.
    pub fn degree(&self) -> Option<i64> {
        let mut deg = None;
        for (w, _) in &self.terms {
            let d = self.alphabet.word_degree(w);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous_of_degree(&self, degree: i64) -> bool {
        self.terms
            .iter()
            .all(|(w, _)| self.alphabet.word_degree(w) == degree)
    }

    pub fn max_word_length(&self) -> usize {
        self.terms.iter().map(|(w, _)| w.len()).max().unwrap_or(0)
    }

    pub fn min_word_length(&self) -> usize {
        self.terms.iter().map(|(w, _)| w.len()).min().unwrap_or(0)
    }

    /// Restriction to words of length exactly `k`.
    pub fn length_slice(&self, k: usize) -> LieElement {
        LieElement {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .cloned()
                .collect(),
        }
    }

    /// Restriction to words of homogeneous degree `n`.
    pub fn degree_slice(&self, n: i64) -> LieElement {
        LieElement {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| self.alphabet.word_degree(w) == n)
                .cloned()
                .collect(),
        }
    }

    /// Re-truncates to a (usually smaller) bracket length.
    pub fn truncated(&self, truncation: usize) -> LieElement {
        LieElement {
            alphabet: self.alphabet.clone(),
            truncation,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= truncation)
                .cloned()
                .collect(),
        }
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &LieElement) -> Result<LieElement> {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn add_scaled(&self, other: &LieElement, scale: &Rational) -> Result<LieElement> {
        self.compatible(other)?;
        if scale.is_zero() || other.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((wa, _)), Some((wb, _))) => match wa.cmp(wb) {
                    std::cmp::Ordering::Less => out.push(a.next().unwrap().clone()),
                    std::cmp::Ordering::Greater => {
                        let (w, c) = b.next().unwrap();
                        let v = scale * c;
                        if !v.is_zero() {
                            out.push((w.clone(), v));
                        }
                    }
                    std::cmp::Ordering::Equal => {
                        let (w, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let v = ca + &(scale * cb);
                        if !v.is_zero() {
                            out.push((w.clone(), v));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (w, c) = b.next().unwrap();
                    let v = scale * c;
                    if !v.is_zero() {
                        out.push((w.clone(), v));
                    }
                }
                (None, None) => break,
            }
        }
        Ok(LieElement {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            terms: out,
        })
    }

    pub fn neg(&self) -> LieElement {
        self.scaled(&-Rational::one())
    }

    pub fn scaled(&self, scale: &Rational) -> LieElement {
        if scale.is_zero() {
            return LieElement::zero(self.alphabet.clone(), self.truncation);
        }
        LieElement {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), scale * c))
                .collect(),
        }
    }

    /// Tensor-algebra (concatenation) product, truncated. The budget bounds
    /// the resulting word length; words longer than it are dropped early.
    pub fn product_with_budget(&self, other: &LieElement, budget: usize) -> Result<LieElement> {
        self.compatible(other)?;
        let budget = budget.min(self.truncation);
        let mut terms = Vec::new();
        for (wa, ca) in &self.terms {
            if wa.len() >= budget {
                continue;
            }
            let room = budget - wa.len();
            for (wb, cb) in &other.terms {
                if wb.len() > room {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                terms.push((w, ca * cb));
            }
        }
        Ok(LieElement::from_terms(
            self.alphabet.clone(),
            self.truncation,
            terms,
        ))
    }

    pub fn product(&self, other: &LieElement) -> Result<LieElement> {
        self.product_with_budget(other, self.truncation)
    }

    /// Graded bracket `[x,y] = xy − (−1)^{|x||y|} yx`, computed term by term
    /// with the Koszul sign of each word pair.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        self.compatible(other)?;
        let n = self.truncation;
        let mut terms = Vec::new();
        for (wa, ca) in &self.terms {
            if wa.len() >= n {
                continue;
            }
            let pa = self.alphabet.word_parity(wa);
            let room = n - wa.len();
            for (wb, cb) in &other.terms {
                if wb.len() > room {
                    continue;
                }
                let pb = self.alphabet.word_parity(wb);
                let c = ca * cb;
                let mut ab = wa.clone();
                ab.extend_from_slice(wb);
                let mut ba = wb.clone();
                ba.extend_from_slice(wa);
                // xy − (−1)^{|x||y|} yx
                let sign = if pa && pb { Rational::one() } else { -Rational::one() };
                terms.push((ab, c.clone()));
                terms.push((ba, sign * c));
            }
        }
        Ok(LieElement::from_terms(
            self.alphabet.clone(),
            self.truncation,
            terms,
        ))
    }

    /// Graded Dynkin operator: each word is sent to its left-nested
    /// bracketing `[[…[g₁,g₂],g₃]…,g_k]`, extended linearly.
    pub fn dynkin(&self) -> Result<LieElement> {
        let mut acc = LieElement::zero(self.alphabet.clone(), self.truncation);
        for (w, c) in &self.terms {
            let mut e = LieElement::generator(self.alphabet.clone(), self.truncation, w[0]);
            for &g in &w[1..] {
                let gen = LieElement::generator(self.alphabet.clone(), self.truncation, g);
                e = e.bracket(&gen)?;
            }
            acc = acc.add_scaled(&e, c)?;
        }
        Ok(acc)
    }

    /// Primitivity test: each word-length-`k` slice must equal its Dynkin
    /// image divided by `k`.
    pub fn is_lie(&self) -> Result<bool> {
        for k in 1..=self.max_word_length() {
            let slice = self.length_slice(k);
            if slice.is_zero() {
                continue;
            }
            let dyn_image = slice.dynkin()?;
            let scaled = slice.scaled(&Rational::from_integer((k as i64).into()));
            if dyn_image != scaled {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Σₙ cₙ · ad_x^n(y)`, truncated. `x` must have degree 0 so that the
    /// iterated brackets stay in a fixed degree.
    pub fn ad_series(coefficients: &[Rational], x: &LieElement, y: &LieElement) -> Result<LieElement> {
        x.compatible(y)?;
        if !x.is_homogeneous_of_degree(0) {
            return Err(Error::Degree(
                "ad-series argument must have degree 0".into(),
            ));
        }
        let mut acc = LieElement::zero(x.alphabet.clone(), x.truncation);
        let mut current = y.clone();
        for c in coefficients {
            if current.is_zero() {
                break;
            }
            if !c.is_zero() {
                acc = acc.add_scaled(&current, c)?;
            }
            current = x.bracket(&current)?;
        }
        Ok(acc)
    }

    /// `ad_x^n(y)` for a single `n`.
    pub fn ad_power(x: &LieElement, n: usize, y: &LieElement) -> Result<LieElement> {
        let mut current = y.clone();
        for _ in 0..n {
            current = x.bracket(&current)?;
        }
        Ok(current)
    }

    /// Terms as an ordered map, the working form for basis peeling.
    pub fn to_map(&self) -> BTreeMap<Word, Rational> {
        self.terms.iter().cloned().collect()
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&crate::linalg::format_rational(c));
            out.push('·');
            for (j, g) in w.iter().enumerate() {
                if j > 0 {
                    out.push('⊗');
                }
                out.push_str(&self.alphabet.generator(*g).name);
            }
        }
        out
    }
}

/// Bernoulli number `B_n` with the convention `B₁ = −1/2`, from the
/// recurrence `Σ_{k≤n} C(n+1,k)·B_k = 0`.
pub fn bernoulli(n: usize) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            let binom = num::integer::binomial(
                num::BigInt::from(m as u64 + 1),
                num::BigInt::from(k as u64),
            );
            acc += Rational::from_integer(binom) * bk;
        }
        let denom = Rational::from_integer(num::BigInt::from(m as u64 + 1));
        b.push(-acc / denom);
    }
    b.pop().expect("nonempty")
}

/// `exp(x) − 1 = Σ_{k≥1} x^k / k!` in the truncated tensor algebra.
fn exp_minus_one(x: &LieElement) -> Result<LieElement> {
    let mut acc = x.clone();
    let mut power = x.clone();
    let mut factorial = Rational::one();
    for k in 2..=x.truncation() {
        power = power.product(x)?;
        if power.is_zero() {
            break;
        }
        factorial *= Rational::from_integer((k as i64).into());
        acc = acc.add_scaled(&power, &factorial.recip())?;
    }
    Ok(acc)
}

/// `log(1 + z) = Σ_{k≥1} (−1)^{k+1} z^k / k` for `z` with no constant term.
fn log_one_plus(z: &LieElement) -> Result<LieElement> {
    let mut acc = z.clone();
    let mut power = z.clone();
    for k in 2..=z.truncation() {
        power = power.product(z)?;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 0 { -1 } else { 1 };
        let coeff = Rational::new(sign.into(), (k as i64).into());
        acc = acc.add_scaled(&power, &coeff)?;
    }
    Ok(acc)
}

/// Baker-Campbell-Hausdorff product `log(exp(x)·exp(y))` of two degree-0
/// elements, exact in the truncation. Associative and unital, with
/// `bch(x, −x) = 0`.
pub fn bch(x: &LieElement, y: &LieElement) -> Result<LieElement> {
    x.compatible(y)?;
    for (e, side) in [(x, "left"), (y, "right")] {
        if !e.is_homogeneous_of_degree(0) && !e.is_zero() {
            return Err(Error::Degree(format!(
                "bch {side} argument must have degree 0"
            )));
        }
    }
    let ex = exp_minus_one(x)?;
    let ey = exp_minus_one(y)?;
    // exp(x)exp(y) = 1 + (ex + ey + ex·ey)
    let z = ex.add(&ey)?.add(&ex.product(&ey)?)?;
    log_one_plus(&z)
}

/// Left-to-right BCH product of a word of degree-0 elements.
pub fn bch_list(factors: &[LieElement]) -> Result<LieElement> {
    let Some((first, rest)) = factors.split_first() else {
        return Err(Error::Other("empty BCH product".into()));
    };
    let mut acc = first.clone();
    for f in rest {
        acc = bch(&acc, f)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Generator;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn two_even() -> (Arc<Alphabet>, LieElement, LieElement) {
        let alpha = Alphabet::new(vec![Generator::new("x", 0), Generator::new("y", 0)]).unwrap();
        let x = LieElement::generator_named(&alpha, 6, "x").unwrap();
        let y = LieElement::generator_named(&alpha, 6, "y").unwrap();
        (alpha, x, y)
    }

    #[test]
    fn bracket_of_degree_zero_generators() {
        let (alpha, x, y) = two_even();
        let b = x.bracket(&y).unwrap();
        let xid = alpha.require("x").unwrap();
        let yid = alpha.require("y").unwrap();
        assert_eq!(b.coefficient(&[xid, yid]), q(1, 1));
        assert_eq!(b.coefficient(&[yid, xid]), q(-1, 1));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn odd_generator_self_bracket_survives() {
        let alpha = Alphabet::new(vec![Generator::new("a", -1)]).unwrap();
        let a = LieElement::generator_named(&alpha, 4, "a").unwrap();
        let aa = a.bracket(&a).unwrap();
        let id = alpha.require("a").unwrap();
        assert_eq!(aa.coefficient(&[id, id]), q(2, 1));
    }

    #[test]
    fn even_generator_self_bracket_vanishes() {
        let (_, x, _) = two_even();
        assert!(x.bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn dynkin_detects_lie_elements() {
        let (_, x, y) = two_even();
        assert!(x.is_lie().unwrap());
        let b = x.bracket(&y).unwrap();
        assert!(b.is_lie().unwrap());
        // The bare word xy alone is not primitive.
        let xy = x.product(&y).unwrap();
        assert!(!xy.is_lie().unwrap());
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(8), q(-1, 30));
    }

    #[test]
    fn bch_unit_and_inverse() {
        let (alpha, x, y) = two_even();
        let zero = LieElement::zero(alpha.clone(), 6);
        assert_eq!(bch(&x, &zero).unwrap(), x);
        assert_eq!(bch(&zero, &y).unwrap(), y);
        assert!(bch(&x, &x.neg()).unwrap().is_zero());
    }

    #[test]
    fn bch_length_two_slice_is_half_bracket() {
        let (_, x, y) = two_even();
        let p = bch(&x, &y).unwrap();
        let expected = x.bracket(&y).unwrap().scaled(&q(1, 2));
        assert_eq!(p.length_slice(2), expected);
        assert!(p.is_lie().unwrap());
    }

    #[test]
    fn ad_series_identity_and_zero() {
        let (alpha, x, y) = two_even();
        let one = [Rational::one()];
        assert_eq!(LieElement::ad_series(&one, &x, &y).unwrap(), y);
        let zero = LieElement::zero(alpha, 6);
        let cs = [q(7, 1), q(3, 1), q(5, 1)];
        assert_eq!(
            LieElement::ad_series(&cs, &zero, &y).unwrap(),
            y.scaled(&q(7, 1))
        );
    }

    #[test]
    fn bernoulli_ad_series_prefix() {
        let (_, x, y) = two_even();
        let coeffs: Vec<Rational> = (0..4)
            .map(|n| {
                let fact: i64 = (1..=n as i64).product::<i64>().max(1);
                bernoulli(n) / Rational::from_integer(fact.into())
            })
            .collect();
        let s = LieElement::ad_series(&coeffs, &x, &y).unwrap();
        // y − ½[x,y] + 1/12·[x,[x,y]] …
        assert_eq!(s.length_slice(1), y);
        assert_eq!(
            s.length_slice(2),
            x.bracket(&y).unwrap().scaled(&q(-1, 2))
        );
        assert_eq!(
            s.length_slice(3),
            x.bracket(&x.bracket(&y).unwrap()).unwrap().scaled(&q(1, 12))
        );
    }
}
