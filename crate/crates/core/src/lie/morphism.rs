use super::{Alphabet, GenId, LieElement, Word};
use crate::linalg::{Rational, SparseMatrix};
use crate::{Error, Result};
use std::sync::Arc;

/// A morphism of free complete Lie algebras: generator images extended
/// multiplicatively over words. Images must be Lie elements of matching
/// degree, which makes the extension send brackets to brackets.
#[derive(Debug, Clone)]
pub struct LieMorphism {
    source: Arc<Alphabet>,
    target: Arc<Alphabet>,
    truncation: usize,
    /// Indexed by source generator id; elements over the target alphabet.
    images: Vec<LieElement>,
}

impl PartialEq for LieMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.truncation == other.truncation
            && Alphabet::same(&self.source, &other.source)
            && Alphabet::same(&self.target, &other.target)
            && self.images == other.images
    }
}
impl Eq for LieMorphism {}

impl LieMorphism {
    /// Builds a morphism, checking image degrees and primitivity.
    pub fn new(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        truncation: usize,
        images: Vec<(String, LieElement)>,
    ) -> Result<LieMorphism> {
        let m = Self::new_unchecked(source, target, truncation, images)?;
        for (id, img) in m.images.iter().enumerate() {
            if !img.is_lie()? {
                return Err(Error::NotLie(format!(
                    "image of `{}` is not primitive",
                    m.source.generator(id as GenId).name
                )));
            }
        }
        Ok(m)
    }

    /// Same as [`LieMorphism::new`] without the primitivity check; degree
    /// preservation is still enforced.
    pub fn new_unchecked(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        truncation: usize,
        images: Vec<(String, LieElement)>,
    ) -> Result<LieMorphism> {
        let mut slots: Vec<Option<LieElement>> = vec![None; source.len()];
        for (name, img) in images {
            let id = source.require(&name)?;
            if img.truncation() != truncation {
                return Err(Error::TruncationMismatch(truncation, img.truncation()));
            }
            if !Alphabet::same(img.alphabet(), &target) {
                return Err(Error::AlphabetMismatch(format!(
                    "image of `{name}` lives over the wrong generator set"
                )));
            }
            let expected = source.degree(id);
            if !img.is_homogeneous_of_degree(expected) {
                return Err(Error::Degree(format!(
                    "image of `{name}` must be homogeneous of degree {expected}"
                )));
            }
            slots[id as usize] = Some(img);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(id, s)| match s {
                Some(e) => Ok(e),
                None => Err(Error::Other(format!(
                    "missing image for generator `{}`",
                    source.generator(id as GenId).name
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LieMorphism {
            source,
            target,
            truncation,
            images,
        })
    }

    pub fn identity(alphabet: Arc<Alphabet>, truncation: usize) -> LieMorphism {
        let images = (0..alphabet.len() as GenId)
            .map(|id| LieElement::generator(alphabet.clone(), truncation, id))
            .collect();
        LieMorphism {
            source: alphabet.clone(),
            target: alphabet,
            truncation,
            images,
        }
    }

    /// A morphism renaming generators, each image `scale · generator`.
    pub fn rename(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        truncation: usize,
        map: impl Fn(&str) -> (String, Rational),
    ) -> Result<LieMorphism> {
        let mut images = Vec::new();
        for g in source.generators() {
            let (name, scale) = map(&g.name);
            let img =
                LieElement::generator_named(&target, truncation, &name)?.scaled(&scale);
            images.push((g.name.clone(), img));
        }
        Self::new_unchecked(source, target, truncation, images)
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn image(&self, id: GenId) -> &LieElement {
        &self.images[id as usize]
    }

    pub fn image_named(&self, name: &str) -> Result<&LieElement> {
        Ok(self.image(self.source.require(name)?))
    }

    pub fn images(&self) -> impl Iterator<Item = (&str, &LieElement)> {
        self.source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, e)| (g.name.as_str(), e))
    }

    /// Applies the morphism: words map to truncated products of the letter
    /// images, extended linearly. Pruning uses the minimal word length of
    /// each remaining image so products never overrun the truncation.
    pub fn apply(&self, x: &LieElement) -> Result<LieElement> {
        if !Alphabet::same(x.alphabet(), &self.source) {
            return Err(Error::AlphabetMismatch(
                "element is not over the morphism source".into(),
            ));
        }
        if x.truncation() != self.truncation {
            return Err(Error::TruncationMismatch(self.truncation, x.truncation()));
        }
        let n = self.truncation;
        let mut acc = LieElement::zero(self.target.clone(), n);
        'terms: for (word, coeff) in x.terms() {
            // Lower bounds for the lengths of the remaining images.
            let mins: Vec<usize> = word
                .iter()
                .map(|&g| {
                    let img = &self.images[g as usize];
                    img.min_word_length()
                })
                .collect();
            if mins.iter().any(|&m| m == 0) {
                continue; // some letter maps to zero
            }
            let mut suffix_min: Vec<usize> = vec![0; word.len() + 1];
            for i in (0..word.len()).rev() {
                suffix_min[i] = suffix_min[i + 1] + mins[i];
            }
            if suffix_min[0] > n {
                continue;
            }
            let mut current: Option<LieElement> = None;
            for (i, &g) in word.iter().enumerate() {
                let img = &self.images[g as usize];
                current = Some(match current {
                    None => img.clone(),
                    Some(c) => {
                        let budget = n - suffix_min[i + 1];
                        let p = c.product_with_budget(img, budget)?;
                        if p.is_zero() {
                            continue 'terms;
                        }
                        p
                    }
                });
            }
            if let Some(c) = current {
                acc = acc.add_scaled(&c, coeff)?;
            }
        }
        Ok(acc)
    }

    /// Composition `self ∘ inner`.
    pub fn compose(&self, inner: &LieMorphism) -> Result<LieMorphism> {
        if !Alphabet::same(&self.source, &inner.target) {
            return Err(Error::AlphabetMismatch(
                "composition sources and targets do not line up".into(),
            ));
        }
        let images = inner
            .source
            .generators()
            .iter()
            .zip(&inner.images)
            .map(|(g, img)| Ok((g.name.clone(), self.apply(img)?)))
            .collect::<Result<Vec<_>>>()?;
        LieMorphism::new_unchecked(
            inner.source.clone(),
            self.target.clone(),
            self.truncation,
            images,
        )
    }

    pub fn is_identity(&self) -> bool {
        Alphabet::same(&self.source, &self.target)
            && self.images.iter().enumerate().all(|(id, img)| {
                img.terms().len() == 1 && {
                    let (w, c) = &img.terms()[0];
                    w.len() == 1 && w[0] == id as GenId && c == &Rational::from_integer(1.into())
                }
            })
    }

    /// Linear part as a matrix: rows indexed by target generators, columns
    /// by source generators.
    pub fn linear_matrix(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.target.len(), self.source.len());
        for (j, img) in self.images.iter().enumerate() {
            for (w, c) in img.terms() {
                if w.len() == 1 {
                    m.set(w[0] as usize, j, c.clone());
                }
            }
        }
        m
    }

    /// Inverse up to truncation, computed word length by word length. The
    /// linear part must be invertible degreewise; the result `g` satisfies
    /// `g∘f = f∘g = id` exactly at the truncation.
    pub fn invert(&self) -> Result<LieMorphism> {
        if self.source.len() != self.target.len() {
            return Err(Error::AlphabetMismatch(
                "inverse needs generator sets of equal size".into(),
            ));
        }
        let n = self.truncation;
        let lin = self.linear_matrix();
        // Linear inverse: solve f₁ x = e_t for every target generator.
        let mut lin_inv_images = Vec::with_capacity(self.target.len());
        for t in 0..self.target.len() {
            let rhs = vec![(t as u32, Rational::from_integer(1.into()))];
            let sol = lin
                .solve(&rhs)?
                .ok_or_else(|| Error::NotInvertible(self.target.degree(t as GenId)))?;
            let terms: Vec<(Word, Rational)> = sol
                .into_iter()
                .map(|(j, c)| {
                    let mut w = Word::new();
                    w.push(j as GenId);
                    (w, c)
                })
                .collect();
            lin_inv_images.push((
                self.target.generator(t as GenId).name.clone(),
                LieElement::from_terms(self.source.clone(), n, terms),
            ));
        }
        let lin_inv = LieMorphism::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            n,
            lin_inv_images,
        )?;

        let mut g = lin_inv.clone();
        for _round in 0..n {
            // error_t = f(g(t)) − t, supported in word lengths ≥ round+2.
            let mut done = true;
            let mut next_images = Vec::with_capacity(self.target.len());
            for (t, gimg) in g.images.iter().enumerate() {
                let fg = self.apply(gimg)?;
                let t_elem =
                    LieElement::generator(self.target.clone(), n, t as GenId);
                let err = fg.sub(&t_elem)?;
                if err.is_zero() {
                    next_images.push((
                        self.target.generator(t as GenId).name.clone(),
                        gimg.clone(),
                    ));
                    continue;
                }
                done = false;
                let correction = lin_inv.apply(&err)?;
                next_images.push((
                    self.target.generator(t as GenId).name.clone(),
                    gimg.sub(&correction)?,
                ));
            }
            if done {
                break;
            }
            g = LieMorphism::new_unchecked(
                self.target.clone(),
                self.source.clone(),
                n,
                next_images,
            )?;
        }
        // The iteration gains one exact word length per round, so this must
        // have converged; verify both composites to be safe.
        if !self.compose(&g)?.is_identity() || !g.compose(self)?.is_identity() {
            return Err(Error::Other(
                "morphism inversion failed to converge at this truncation".into(),
            ));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{Generator, LieElement};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn identity_morphism_is_identity() {
        let alpha = Alphabet::new(vec![Generator::new("x", 0), Generator::new("y", 2)]).unwrap();
        let id = LieMorphism::identity(alpha.clone(), 5);
        let x = LieElement::generator_named(&alpha, 5, "x").unwrap();
        let y = LieElement::generator_named(&alpha, 5, "y").unwrap();
        let e = x.bracket(&y).unwrap().add(&x).unwrap();
        assert_eq!(id.apply(&e).unwrap(), e);
        assert!(id.is_identity());
    }

    #[test]
    fn killing_a_generator_kills_its_brackets() {
        let alpha = Alphabet::new(vec![Generator::new("g", 0), Generator::new("y", 0)]).unwrap();
        let zero = LieElement::zero(alpha.clone(), 5);
        let y_img = LieElement::generator_named(&alpha, 5, "y").unwrap();
        let f = LieMorphism::new(
            alpha.clone(),
            alpha.clone(),
            5,
            vec![("g".into(), zero), ("y".into(), y_img.clone())],
        )
        .unwrap();
        let g = LieElement::generator_named(&alpha, 5, "g").unwrap();
        let e = g.bracket(&y_img).unwrap();
        assert!(f.apply(&e).unwrap().is_zero());
    }

    #[test]
    fn morphism_respects_brackets() {
        let src = Alphabet::new(vec![Generator::new("p", 0), Generator::new("r", 1)]).unwrap();
        let tgt = Alphabet::new(vec![Generator::new("u", 0), Generator::new("v", 1)]).unwrap();
        let n = 5;
        let u = LieElement::generator_named(&tgt, n, "u").unwrap();
        let v = LieElement::generator_named(&tgt, n, "v").unwrap();
        let img_p = u.clone();
        let img_r = v.add(&u.bracket(&v).unwrap()).unwrap();
        let f = LieMorphism::new(
            src.clone(),
            tgt,
            n,
            vec![("p".into(), img_p.clone()), ("r".into(), img_r.clone())],
        )
        .unwrap();
        let p = LieElement::generator_named(&src, n, "p").unwrap();
        let r = LieElement::generator_named(&src, n, "r").unwrap();
        assert_eq!(
            f.apply(&p.bracket(&r).unwrap()).unwrap(),
            img_p.bracket(&img_r).unwrap()
        );
    }

    #[test]
    fn inverse_of_unitriangular_morphism() {
        // f(a) = u, f(b) = v + [u,v]; the inverse sends v to the
        // alternating ad-series Σ (−1)^n ad_a^n(b), truncated.
        let n = 6;
        let src = Alphabet::new(vec![Generator::new("a", 0), Generator::new("b", 3)]).unwrap();
        let tgt = Alphabet::new(vec![Generator::new("u", 0), Generator::new("v", 3)]).unwrap();
        let u = LieElement::generator_named(&tgt, n, "u").unwrap();
        let v = LieElement::generator_named(&tgt, n, "v").unwrap();
        let f = LieMorphism::new(
            src.clone(),
            tgt.clone(),
            n,
            vec![
                ("a".into(), u.clone()),
                ("b".into(), v.add(&u.bracket(&v).unwrap()).unwrap()),
            ],
        )
        .unwrap();
        let g = f.invert().unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(g.compose(&f).unwrap().is_identity());

        let a = LieElement::generator_named(&src, n, "a").unwrap();
        let b = LieElement::generator_named(&src, n, "b").unwrap();
        let coeffs: Vec<Rational> = (0..n as i64).map(|k| q(if k % 2 == 0 { 1 } else { -1 })).collect();
        let expected = LieElement::ad_series(&coeffs, &a, &b).unwrap();
        assert_eq!(g.image_named("v").unwrap(), &expected);
    }

    #[test]
    fn non_invertible_linear_part_errors() {
        let alpha = Alphabet::new(vec![Generator::new("x", 0)]).unwrap();
        let zero = LieElement::zero(alpha.clone(), 3);
        let f = LieMorphism::new(alpha.clone(), alpha, 3, vec![("x".into(), zero)]).unwrap();
        assert!(matches!(f.invert(), Err(Error::NotInvertible(0))));
    }
}
