use std::collections::HashMap;

use super::algebra::{FreeLieAlgebra, HallIndex};
use super::element::LieElement;
use crate::error::{Error, Result};

/// Lie algebra map given by letter images, evaluated on demand along Hall
/// factorizations. Letter images may be supplied incrementally; an element
/// can be mapped as soon as the images of its letters are known.
pub struct LazyLieHom<'a> {
    source: &'a FreeLieAlgebra,
    target: &'a FreeLieAlgebra,
    letters: Vec<Option<LieElement>>,
    memo: HashMap<HallIndex, LieElement>,
}

impl<'a> LazyLieHom<'a> {
    pub fn new(source: &'a FreeLieAlgebra, target: &'a FreeLieAlgebra) -> Self {
        LazyLieHom { source, target, letters: vec![None; source.generators().len()], memo: HashMap::new() }
    }

    pub fn set_letter(&mut self, i: usize, image: LieElement) {
        self.letters[i] = Some(image);
        self.memo.remove(&self.source.letter(i));
    }

    pub fn letter_image(&self, i: usize) -> Option<&LieElement> {
        self.letters[i].as_ref()
    }

    fn on_basis(&mut self, idx: HallIndex) -> Result<LieElement> {
        if let Some(v) = self.memo.get(&idx) {
            return Ok(v.clone());
        }
        let h = self.source.element(idx);
        let v = match h.factors {
            None => {
                let i = h.word.leaves()[0] as usize;
                self.letters[i].clone().ok_or_else(|| {
                    Error::invariant("letter image available", self.source.generators()[i].name.clone())
                })?
            }
            Some((a, b)) => {
                let (x, y) = (self.on_basis(a)?, self.on_basis(b)?);
                self.target.bracket_truncated(&x, &y)
            }
        };
        self.memo.insert(idx, v.clone());
        Ok(v)
    }

    pub fn apply(&mut self, x: &LieElement) -> Result<LieElement> {
        let mut out = LieElement::zero();
        for (idx, c) in x.terms() {
            out.add_scaled(&self.on_basis(*idx)?, c);
        }
        Ok(out)
    }
}
