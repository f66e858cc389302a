use super::{Alphabet, GenId, LieElement, Word};
use crate::linalg::Rational;
use crate::{Error, Result};
use std::sync::Arc;

/// A graded derivation, given on generators and extended to words by the
/// graded Leibniz rule: replacing a letter picks up the Koszul sign of the
/// derivation degree against the prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct LieDerivation {
    alphabet: Arc<Alphabet>,
    truncation: usize,
    degree: i64,
    images: Vec<LieElement>,
}

impl LieDerivation {
    pub fn new(
        alphabet: Arc<Alphabet>,
        truncation: usize,
        degree: i64,
        images: Vec<(String, LieElement)>,
    ) -> Result<LieDerivation> {
        let mut slots: Vec<Option<LieElement>> = vec![None; alphabet.len()];
        for (name, img) in images {
            let id = alphabet.require(&name)?;
            if img.truncation() != truncation {
                return Err(Error::TruncationMismatch(truncation, img.truncation()));
            }
            if !Alphabet::same(img.alphabet(), &alphabet) {
                return Err(Error::AlphabetMismatch(format!(
                    "derivation image of `{name}` lives over the wrong generator set"
                )));
            }
            let expected = alphabet.degree(id) + degree;
            if !img.is_homogeneous_of_degree(expected) {
                return Err(Error::Degree(format!(
                    "derivation image of `{name}` must be homogeneous of degree {expected}"
                )));
            }
            slots[id as usize] = Some(img);
        }
        let images = slots
            .into_iter()
            .map(|s| s.map(Ok).unwrap_or_else(|| {
                Err(Error::Other("missing derivation image".into()))
            }))
            .collect::<Result<Vec<_>>>()?;
        Ok(LieDerivation {
            alphabet,
            truncation,
            degree,
            images,
        })
    }

    /// The zero derivation of a given degree.
    pub fn zero(alphabet: Arc<Alphabet>, truncation: usize, degree: i64) -> LieDerivation {
        let images = (0..alphabet.len())
            .map(|_| LieElement::zero(alphabet.clone(), truncation))
            .collect();
        LieDerivation {
            alphabet,
            truncation,
            degree,
            images,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn image(&self, id: GenId) -> &LieElement {
        &self.images[id as usize]
    }

    pub fn image_named(&self, name: &str) -> Result<&LieElement> {
        Ok(self.image(self.alphabet.require(name)?))
    }

    pub fn images(&self) -> impl Iterator<Item = (&str, &LieElement)> {
        self.alphabet
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, e)| (g.name.as_str(), e))
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(LieElement::is_zero)
    }

    /// Applies the derivation by the graded Leibniz rule on words.
    pub fn apply(&self, x: &LieElement) -> Result<LieElement> {
        if !Alphabet::same(x.alphabet(), &self.alphabet) {
            return Err(Error::AlphabetMismatch(
                "element is not over the derivation's generator set".into(),
            ));
        }
        if x.truncation() != self.truncation {
            return Err(Error::TruncationMismatch(self.truncation, x.truncation()));
        }
        let n = self.truncation;
        let odd = self.degree.rem_euclid(2) == 1;
        let mut terms: Vec<(Word, Rational)> = Vec::new();
        for (word, coeff) in x.terms() {
            let rest = word.len() - 1; // letters kept when one is replaced
            if rest > n {
                continue;
            }
            let budget = n - rest;
            let mut prefix_odd = false;
            for (i, &g) in word.iter().enumerate() {
                let img = &self.images[g as usize];
                if !img.is_zero() {
                    let sign_flip = odd && prefix_odd;
                    for (iw, ic) in img.terms() {
                        if iw.len() > budget {
                            continue;
                        }
                        let mut w = Word::new();
                        w.extend_from_slice(&word[..i]);
                        w.extend_from_slice(iw);
                        w.extend_from_slice(&word[i + 1..]);
                        let mut c = coeff * ic;
                        if sign_flip {
                            c = -c;
                        }
                        terms.push((w, c));
                    }
                }
                prefix_odd ^= self.alphabet.parity(g);
            }
        }
        Ok(LieElement::from_terms(self.alphabet.clone(), n, terms))
    }

    /// Sum of two derivations of the same degree.
    pub fn add(&self, other: &LieDerivation) -> Result<LieDerivation> {
        if self.degree != other.degree {
            return Err(Error::Degree(
                "cannot add derivations of different degrees".into(),
            ));
        }
        let images = self
            .alphabet
            .generators()
            .iter()
            .zip(self.images.iter().zip(&other.images))
            .map(|(g, (a, b))| Ok((g.name.clone(), a.add(b)?)))
            .collect::<Result<Vec<_>>>()?;
        LieDerivation::new(self.alphabet.clone(), self.truncation, self.degree, images)
    }

    /// Graded (anti)commutator-style composite `self∘other` evaluated on
    /// generators, returned as a new derivation of the summed degree.
    pub fn compose_on_generators(&self, other: &LieDerivation) -> Result<LieDerivation> {
        let images = self
            .alphabet
            .generators()
            .iter()
            .zip(&other.images)
            .map(|(g, img)| Ok((g.name.clone(), self.apply(img)?)))
            .collect::<Result<Vec<_>>>()?;
        LieDerivation::new(
            self.alphabet.clone(),
            self.truncation,
            self.degree + other.degree,
            images,
        )
    }

    /// `e^D(x) = Σ_k D^k(x)/k!` for a degree-0 derivation. The series must
    /// vanish under truncation; if it fails to terminate the call errors.
    pub fn exp_apply(&self, x: &LieElement) -> Result<LieElement> {
        if self.degree != 0 {
            return Err(Error::Degree(
                "exponential needs a degree-0 derivation".into(),
            ));
        }
        let mut acc = x.clone();
        let mut term = x.clone();
        let cap = (self.truncation + 2) * (self.truncation + 2);
        for k in 1..=cap {
            term = self.apply(&term)?;
            if term.is_zero() {
                return Ok(acc);
            }
            let kq = Rational::from_integer((k as i64).into());
            term = term.scaled(&kq.recip());
            acc = acc.add(&term)?;
        }
        if self.apply(&term)?.is_zero() {
            return Ok(acc);
        }
        Err(Error::SeriesDivergence)
    }
}

/// The perturbation derivation `ad_a : x ↦ [a, x]` of degree `|a|`.
pub fn ad_derivation(a: &LieElement) -> Result<LieDerivation> {
    let degree = a.degree().ok_or_else(|| {
        Error::Degree("ad of a non-homogeneous element".into())
    })?;
    let alphabet = a.alphabet().clone();
    let images = alphabet
        .generators()
        .iter()
        .enumerate()
        .map(|(id, g)| {
            let gen = LieElement::generator(alphabet.clone(), a.truncation(), id as GenId);
            Ok((g.name.clone(), a.bracket(&gen)?))
        })
        .collect::<Result<Vec<_>>>()?;
    LieDerivation::new(alphabet, a.truncation(), degree, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Generator;

    fn setup() -> (Arc<Alphabet>, LieDerivation) {
        // i(v) = sv', i(v') = i(sv') = 0, a degree +1 derivation.
        let alpha = Alphabet::new(vec![
            Generator::new("v", 1),
            Generator::new("v'", 1),
            Generator::new("sv'", 2),
        ])
        .unwrap();
        let sv = LieElement::generator_named(&alpha, 5, "sv'").unwrap();
        let zero = LieElement::zero(alpha.clone(), 5);
        let i = LieDerivation::new(
            alpha.clone(),
            5,
            1,
            vec![
                ("v".into(), sv),
                ("v'".into(), zero.clone()),
                ("sv'".into(), zero),
            ],
        )
        .unwrap();
        (alpha, i)
    }

    #[test]
    fn zero_derivation_vanishes() {
        let (alpha, _) = setup();
        let d = LieDerivation::zero(alpha.clone(), 5, -1);
        let v = LieElement::generator_named(&alpha, 5, "v").unwrap();
        assert!(d.apply(&v).unwrap().is_zero());
    }

    #[test]
    fn derivation_on_single_generator() {
        let (alpha, i) = setup();
        let v = LieElement::generator_named(&alpha, 5, "v").unwrap();
        let sv = LieElement::generator_named(&alpha, 5, "sv'").unwrap();
        assert_eq!(i.apply(&v).unwrap(), sv);
    }

    #[test]
    fn graded_leibniz_rule() {
        let (alpha, i) = setup();
        let v = LieElement::generator_named(&alpha, 5, "v").unwrap();
        let vp = LieElement::generator_named(&alpha, 5, "v'").unwrap();
        let sv = LieElement::generator_named(&alpha, 5, "sv'").unwrap();
        // i[v, v'] = [iv, v'] + (−1)^{|i||v|}[v, iv'] = [sv', v']
        let lhs = i.apply(&v.bracket(&vp).unwrap()).unwrap();
        let rhs = sv.bracket(&vp).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_property_on_random_brackets() {
        let (alpha, i) = setup();
        let v = LieElement::generator_named(&alpha, 5, "v").unwrap();
        let vp = LieElement::generator_named(&alpha, 5, "v'").unwrap();
        let x = v.bracket(&vp).unwrap(); // degree 2
        let y = v.clone(); // degree 1
        // D[x,y] = [Dx,y] + (−1)^{|D||x|}[x,Dy]
        let lhs = i.apply(&x.bracket(&y).unwrap()).unwrap();
        let rhs = i
            .apply(&x)
            .unwrap()
            .bracket(&y)
            .unwrap()
            .add(&x.bracket(&i.apply(&y).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_of_zero_derivation() {
        let (alpha, _) = setup();
        let d = LieDerivation::zero(alpha.clone(), 5, 0);
        let v = LieElement::generator_named(&alpha, 5, "v").unwrap();
        assert_eq!(d.exp_apply(&v).unwrap(), v);
    }
}
