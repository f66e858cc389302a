use super::{Alphabet, GenId, LieElement, Word};
use crate::linalg::{Rational, SparseVec};
use crate::{Error, Result};
use num::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// All Lyndon words of length exactly `k` over `letters` symbols, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(letters: usize, k: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if letters == 0 || k == 0 {
        return out;
    }
    let max = (letters - 1) as GenId;
    let mut w: Vec<GenId> = vec![0];
    loop {
        if w.len() == k {
            out.push(Word::from_slice(&w));
        }
        // Extend periodically up to length k.
        let m = w.len();
        while w.len() < k {
            let next = w[w.len() - m];
            w.push(next);
        }
        // Drop trailing maximal letters, then increment.
        while let Some(&last) = w.last() {
            if last == max {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

fn is_lyndon(w: &[GenId]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorization `w = u·v` of a Lyndon word of length ≥ 2:
/// `v` is the longest proper Lyndon suffix.
fn standard_factorization(w: &[GenId]) -> usize {
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            return i;
        }
    }
    unreachable!("every Lyndon word of length ≥ 2 has a proper Lyndon suffix")
}

/// One basis monomial of a `(word length, degree)` slice: a bracketing whose
/// word expansion is triangular against its leading (lexicographically
/// smallest) word.
#[derive(Debug, Clone)]
pub struct BasisMonomial {
    pub leading: Word,
    pub leading_coeff: Rational,
    pub expansion: LieElement,
}

/// Basis of the `(k, n)`-slice of the free graded Lie algebra: standard
/// Lyndon bracketings of degree `n`, plus squares `[σ(u),σ(u)]` of odd
/// Lyndon bracketings when `k` is even. Monomials are ordered by leading
/// word, which makes coordinate extraction a triangular peeling.
pub struct SliceBasis {
    pub word_length: usize,
    pub degree: i64,
    pub monomials: Vec<BasisMonomial>,
}

impl SliceBasis {
    pub fn build(alphabet: &Arc<Alphabet>, truncation: usize, k: usize, degree: i64) -> SliceBasis {
        let mut cache: HashMap<Word, LieElement> = HashMap::new();
        let mut monomials: Vec<BasisMonomial> = Vec::new();

        for w in lyndon_words(alphabet.len(), k) {
            if alphabet.word_degree(&w) != degree {
                continue;
            }
            let expansion = expand(alphabet, truncation, &w, &mut cache);
            monomials.push(BasisMonomial {
                leading: w,
                leading_coeff: Rational::one(),
                expansion,
            });
        }
        if k % 2 == 0 && k >= 2 {
            for u in lyndon_words(alphabet.len(), k / 2) {
                let d = alphabet.word_degree(&u);
                if 2 * d != degree || d.rem_euclid(2) != 1 {
                    continue;
                }
                let e = expand(alphabet, truncation, &u, &mut cache);
                let square = e.bracket(&e).expect("compatible by construction");
                let mut leading = u.clone();
                leading.extend_from_slice(&u);
                monomials.push(BasisMonomial {
                    leading,
                    leading_coeff: Rational::from_integer(2.into()),
                    expansion: square,
                });
            }
        }
        monomials.sort_by(|a, b| a.leading.cmp(&b.leading));
        SliceBasis {
            word_length: k,
            degree,
            monomials,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    fn position_of_leading(&self, w: &[GenId]) -> Option<usize> {
        self.monomials
            .binary_search_by(|m| m.leading.as_slice().cmp(w))
            .ok()
    }

    /// Coordinates of a length-`k` homogeneous element in this basis, by
    /// peeling leading words. Returns `None` if the element is not in the
    /// span (in particular if it is not a Lie element).
    pub fn coordinates(&self, terms: &mut BTreeMap<Word, Rational>) -> Option<Vec<(usize, Rational)>> {
        let mut coords = Vec::new();
        while let Some((w, c)) = terms.pop_first() {
            if c.is_zero() {
                continue;
            }
            let idx = self.position_of_leading(&w)?;
            let m = &self.monomials[idx];
            let coeff = c / &m.leading_coeff;
            for (ew, ec) in m.expansion.terms() {
                if ew.as_slice() == w.as_slice() {
                    continue;
                }
                let delta = &coeff * ec;
                let entry = terms.entry(ew.clone()).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    terms.remove(ew);
                }
            }
            coords.push((idx, coeff));
        }
        Some(coords)
    }
}

fn expand(
    alphabet: &Arc<Alphabet>,
    truncation: usize,
    w: &[GenId],
    cache: &mut HashMap<Word, LieElement>,
) -> LieElement {
    if let Some(e) = cache.get(w) {
        return e.clone();
    }
    let result = if w.len() == 1 {
        LieElement::generator(alphabet.clone(), truncation, w[0])
    } else {
        let split = standard_factorization(w);
        let left = expand(alphabet, truncation, &w[..split], cache);
        let right = expand(alphabet, truncation, &w[split..], cache);
        left.bracket(&right).expect("compatible by construction")
    };
    cache.insert(Word::from_slice(w), result.clone());
    result
}

/// Basis of the degree-`n` component of the truncated free Lie algebra,
/// one slice per word length `1..=N`, concatenated in that order.
pub struct DegreeBasis {
    pub degree: i64,
    pub slices: Vec<SliceBasis>,
    offsets: Vec<usize>,
    total: usize,
}

impl DegreeBasis {
    pub fn build(alphabet: &Arc<Alphabet>, truncation: usize, degree: i64) -> DegreeBasis {
        let mut slices = Vec::with_capacity(truncation);
        let mut offsets = Vec::with_capacity(truncation);
        let mut total = 0;
        for k in 1..=truncation {
            let s = SliceBasis::build(alphabet, truncation, k, degree);
            offsets.push(total);
            total += s.dim();
            slices.push(s);
        }
        DegreeBasis {
            degree,
            slices,
            offsets,
            total,
        }
    }

    pub fn dim(&self) -> usize {
        self.total
    }

    /// Dimension of the sub-basis with word length at most `k`.
    pub fn dim_up_to_length(&self, k: usize) -> usize {
        self.slices
            .iter()
            .filter(|s| s.word_length <= k)
            .map(SliceBasis::dim)
            .sum()
    }

    /// Word length of the monomial at a global index.
    pub fn word_length_of(&self, index: usize) -> usize {
        for (s, off) in self.slices.iter().zip(&self.offsets) {
            if index < off + s.dim() {
                return s.word_length;
            }
        }
        panic!("index out of range")
    }

    pub fn monomial(&self, index: usize) -> &BasisMonomial {
        for (s, off) in self.slices.iter().zip(&self.offsets) {
            if index < off + s.dim() {
                return &s.monomials[index - off];
            }
        }
        panic!("index out of range")
    }

    /// Coordinates of a degree-homogeneous element across all word lengths.
    pub fn coordinates(&self, element: &LieElement) -> Result<SparseVec> {
        if element.is_zero() {
            return Ok(Vec::new());
        }
        if !element.is_homogeneous_of_degree(self.degree) {
            return Err(Error::Degree(format!(
                "element is not homogeneous of degree {}",
                self.degree
            )));
        }
        let mut out: SparseVec = Vec::new();
        for (slice, off) in self.slices.iter().zip(&self.offsets) {
            let part = element.length_slice(slice.word_length);
            if part.is_zero() {
                continue;
            }
            let mut map = part.to_map();
            let coords = slice.coordinates(&mut map).ok_or_else(|| {
                Error::NotLie(format!(
                    "no coordinates at word length {}, degree {}",
                    slice.word_length, self.degree
                ))
            })?;
            for (i, c) in coords {
                out.push(((off + i) as u32, c));
            }
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    /// Reassembles an element from coordinates.
    pub fn element_from_coordinates(
        &self,
        alphabet: &Arc<Alphabet>,
        truncation: usize,
        coords: &SparseVec,
    ) -> LieElement {
        let mut acc = LieElement::zero(alphabet.clone(), truncation);
        for (i, c) in coords {
            let m = self.monomial(*i as usize);
            acc = acc
                .add_scaled(&m.expansion, c)
                .expect("compatible by construction");
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Generator;

    #[test]
    fn lyndon_word_counts() {
        // Counts over a 2-letter alphabet: 2, 1, 2, 3, 6, 9.
        let counts: Vec<usize> = (1..=6).map(|k| lyndon_words(2, k).len()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
        // Necklace ordering is lexicographic.
        let words = lyndon_words(2, 3);
        assert!(words.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_odd_generator_slices() {
        let alpha = Alphabet::new(vec![Generator::new("a", -1)]).unwrap();
        let b1 = SliceBasis::build(&alpha, 4, 1, -1);
        assert_eq!(b1.dim(), 1);
        let b2 = SliceBasis::build(&alpha, 4, 2, -2);
        assert_eq!(b2.dim(), 1); // [a,a]
        assert_eq!(b2.monomials[0].leading_coeff, Rational::from_integer(2.into()));
        let b3 = SliceBasis::build(&alpha, 4, 3, -3);
        assert_eq!(b3.dim(), 0); // [a,[a,a]] = 0
        let b4 = SliceBasis::build(&alpha, 4, 4, -4);
        assert_eq!(b4.dim(), 0);
    }

    #[test]
    fn single_even_generator_has_no_square() {
        let alpha = Alphabet::new(vec![Generator::new("x", 0)]).unwrap();
        assert_eq!(SliceBasis::build(&alpha, 4, 2, 0).dim(), 0);
    }

    #[test]
    fn two_even_generators_length_two() {
        let alpha = Alphabet::new(vec![Generator::new("x", 0), Generator::new("y", 0)]).unwrap();
        let b = SliceBasis::build(&alpha, 4, 2, 0);
        assert_eq!(b.dim(), 1);
        let x = LieElement::generator_named(&alpha, 4, "x").unwrap();
        let y = LieElement::generator_named(&alpha, 4, "y").unwrap();
        assert_eq!(b.monomials[0].expansion, x.bracket(&y).unwrap());
    }

    #[test]
    fn coordinates_round_trip() {
        let alpha = Alphabet::new(vec![
            Generator::new("a", -1),
            Generator::new("x", 0),
            Generator::new("u", 1),
        ])
        .unwrap();
        let n = 4;
        let a = LieElement::generator_named(&alpha, n, "a").unwrap();
        let x = LieElement::generator_named(&alpha, n, "x").unwrap();
        let u = LieElement::generator_named(&alpha, n, "u").unwrap();
        // Mixed-length degree −1 element.
        let e = a
            .add(&x.bracket(&a).unwrap())
            .unwrap()
            .add(&u.bracket(&a.bracket(&a).unwrap()).unwrap())
            .unwrap();
        assert_eq!(e.degree(), Some(-1));
        let basis = DegreeBasis::build(&alpha, n, -1);
        let coords = basis.coordinates(&e).unwrap();
        let back = basis.element_from_coordinates(&alpha, n, &coords);
        assert_eq!(back, e);
    }

    #[test]
    fn coordinates_reject_non_lie() {
        let alpha = Alphabet::new(vec![Generator::new("x", 0), Generator::new("y", 0)]).unwrap();
        let x = LieElement::generator_named(&alpha, 3, "x").unwrap();
        let y = LieElement::generator_named(&alpha, 3, "y").unwrap();
        let xy = x.product(&y).unwrap();
        let basis = DegreeBasis::build(&alpha, 3, 0);
        assert!(basis.coordinates(&xy).is_err());
    }

    /// Independent dimension oracle: the Dynkin operator `D` acts on the
    /// `(k, n)` word slice with `D∘D = k·D` on primitives; the slice
    /// dimension equals the rank of `D`.
    #[test]
    fn slice_dimension_matches_dynkin_rank() {
        use crate::linalg::SparseMatrix;
        let alpha = Alphabet::new(vec![Generator::new("a", -1), Generator::new("x", 0)]).unwrap();
        for k in 1..=4usize {
            for degree in -4..=0i64 {
                let words: Vec<Word> = all_words(2, k)
                    .into_iter()
                    .filter(|w| alpha.word_degree(w) == degree)
                    .collect();
                if words.is_empty() {
                    continue;
                }
                let index: BTreeMap<Word, usize> =
                    words.iter().cloned().zip(0..).collect();
                let mut cols = Vec::new();
                for w in &words {
                    let e = LieElement::from_terms(
                        alpha.clone(),
                        k,
                        vec![(w.clone(), Rational::one())],
                    );
                    let d = e.dynkin().unwrap();
                    let mut col: SparseVec = d
                        .terms()
                        .iter()
                        .map(|(dw, c)| (index[dw] as u32, c.clone()))
                        .collect();
                    col.sort_by_key(|e| e.0);
                    cols.push(col);
                }
                let rank = SparseMatrix::from_columns(words.len(), cols).rank();
                let dim = SliceBasis::build(&alpha, k, k, degree).dim();
                assert_eq!(rank, dim, "k={k} degree={degree}");
            }
        }
    }

    fn all_words(letters: usize, k: usize) -> Vec<Word> {
        let mut out = vec![Word::new()];
        for _ in 0..k {
            let mut next = Vec::new();
            for w in &out {
                for g in 0..letters {
                    let mut w2 = w.clone();
                    w2.push(g as GenId);
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    }
}
