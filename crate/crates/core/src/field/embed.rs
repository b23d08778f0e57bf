use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::{Field, FieldElem};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Largest subfield scanned when locating the image of a generator.
const SUBFIELD_SCAN_GUARD: u64 = 10_000_000;

/// Ring homomorphism `F_{p^e} -> F_{p^n}` fixing `F_p`, determined by the
/// image of the source generator: the smallest root of the source modulus in
/// the target.
#[derive(Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    image_of_generator: FieldElem,
    /// images of `1, x, ..., x^{e-1}`
    powers: Vec<FieldElem>,
}

static EMBEDDINGS: Mutex<BTreeMap<(u32, usize, usize), Arc<Embedding>>> = Mutex::new(BTreeMap::new());

impl Embedding {
    pub fn new(source: Field, target: Field) -> Result<Arc<Embedding>> {
        if !source.divides(target) {
            return Err(Error::NotSubfield { from: source.degree(), to: target.degree() });
        }
        let key = (source.characteristic(), source.degree(), target.degree());
        if let Some(e) = EMBEDDINGS.lock().expect("embedding cache poisoned").get(&key) {
            return Ok(e.clone());
        }
        let image = if source == target {
            source.generator()
        } else if source.degree() == 1 {
            target.zero()
        } else {
            smallest_root(source, target)?
        };
        let mut powers = Vec::with_capacity(source.degree());
        let mut cur = target.one();
        for _ in 0..source.degree() {
            powers.push(cur.clone());
            cur = &cur * &image;
        }
        let emb = Arc::new(Embedding { source, target, image_of_generator: image, powers });
        EMBEDDINGS.lock().expect("embedding cache poisoned").insert(key, emb.clone());
        Ok(emb)
    }

    pub fn source(&self) -> Field {
        self.source
    }

    pub fn target(&self) -> Field {
        self.target
    }

    pub fn image_of_generator(&self) -> &FieldElem {
        &self.image_of_generator
    }

    pub fn apply(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.field() != self.source {
            return Err(Error::MixedFields);
        }
        if self.source == self.target {
            return Ok(a.clone());
        }
        let mut acc = self.target.zero();
        for (&c, pw) in a.coeffs().iter().zip(&self.powers) {
            if c != 0 {
                acc += &(&self.target.from_int(c as i64) * pw);
            }
        }
        Ok(acc)
    }
}

pub fn embed(a: &FieldElem, emb: &Embedding) -> Result<FieldElem> {
    emb.apply(a)
}

/// Enumerates the copy of `F_{p^e}` inside the target (the fixed space of the
/// `e`-th power of Frobenius) and returns the smallest root of the source
/// modulus found there.
fn smallest_root(source: Field, target: Field) -> Result<FieldElem> {
    let e = source.degree();
    let n = target.degree();
    let p = target.characteristic() as u64;
    let size = p.checked_pow(e as u32).filter(|&s| s <= SUBFIELD_SCAN_GUARD).ok_or(Error::GuardExceeded {
        what: "subfield scan for embedding",
        size: format!("{p}^{e}"),
        guard: SUBFIELD_SCAN_GUARD,
    })?;
    let fp = super::make_field(p, 1)?;
    // Row i of `frob_e` holds the coordinates of (x^i)^{p^e}.
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = target.zero();
        v.c[i] = 1;
        let mut w = v.clone();
        for _ in 0..e {
            w = w.frobenius();
        }
        let d = &w - &v;
        rows.push(d.coeffs().iter().map(|&c| fp.from_int(c as i64)).collect::<Vec<_>>());
    }
    // a fixed  <=>  coords(a) * (Frob^e - I) = 0
    let basis: Vec<FieldElem> = Matrix::from_rows(fp, rows)
        .left_null_space()
        .into_iter()
        .map(|v| {
            let coeffs: Vec<u64> = v.iter().map(|c| c.coeffs()[0] as u64).collect();
            target.from_coeffs(&coeffs).expect("reduced coordinates")
        })
        .collect();
    assert_eq!(basis.len(), e, "fixed field of Frobenius^e has dimension e");

    let modulus: Vec<FieldElem> = source.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
    let mut best: Option<FieldElem> = None;
    let mut found = 0usize;
    for idx in 0..size {
        let mut k = idx;
        let mut a = target.zero();
        for b in &basis {
            let c = k % p;
            k /= p;
            if c != 0 {
                a += &(&target.from_int(c as i64) * b);
            }
        }
        let mut acc = target.zero();
        for c in modulus.iter().rev() {
            acc = &(&acc * &a) + c;
        }
        if acc.is_zero() {
            found += 1;
            if best.as_ref().is_none_or(|b| a < *b) {
                best = Some(a);
            }
        }
    }
    assert_eq!(found, e, "an irreducible polynomial of degree e splits in F_{{p^e}}");
    Ok(best.expect("roots exist"))
}
