//! Finite-dimensional Hopf algebras given by structure constants.
//!
//! Tables are either explicit (every product, coproduct and antipode entry
//! supplied) or derived lazily from a [`Presentation`]: the left action of the
//! generators on the basis plus one witness `e_i = c * g * e_j` per basis
//! element. Products, coproducts and antipodes of arbitrary basis elements are
//! then obtained by recursion along the witnesses and memoized.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{LinearMap, SparseVec};
use crate::report::{Check, Report};
use crate::scalar::{Field, Scalar};

/// Left multiplication of a generator on a basis vector, in closed form.
pub trait GeneratorAction: Send + Sync {
    /// `generators[gen] * e_k`
    fn left_mul(&self, gen: usize, k: usize) -> SparseVec;
}

/// One noncommutative word in the generators with a coefficient.
#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: Scalar,
    /// Generator positions, read left to right.
    pub word: Vec<usize>,
}

/// `e_i = coeff * g * e_rest`
#[derive(Clone, Debug)]
pub struct Witness {
    pub gen: usize,
    pub rest: usize,
    pub coeff: Scalar,
}

/// Generators-and-relations description used for lazy tables and for
/// verification without touching every pair of basis elements.
///
/// Verifying against a presentation relies on the relations spanning the
/// algebra by the given basis (the usual PBW spanning lemma), so that the
/// operator algebra generated on the basis is the algebra itself.
#[derive(Clone)]
pub struct Presentation {
    /// Basis index of each generator.
    pub generators: Vec<usize>,
    pub generator_names: Vec<String>,
    /// Each relation is `sum of terms = 0`.
    pub relations: Vec<Vec<Term>>,
    /// Witness per basis element; `None` marks the unit.
    pub witness: Vec<Option<Witness>>,
    pub coproduct: Vec<SparseVec>,
    pub antipode: Vec<SparseVec>,
    pub counit: Vec<Scalar>,
    pub action: Arc<dyn GeneratorAction>,
}

/// Raw table data for an explicitly given Hopf algebra. Triples are sparse
/// entries; `antipode` entries are `(row, col, c)` meaning `S(e_col)` has
/// coefficient `c` at `e_row`.
#[derive(Clone, Debug)]
pub struct Tables {
    pub field: Field,
    pub labels: Vec<String>,
    pub mult: Vec<(usize, usize, usize, Scalar)>,
    pub unit: Vec<(usize, Scalar)>,
    pub comult: Vec<(usize, usize, usize, Scalar)>,
    pub counit: Vec<(usize, Scalar)>,
    pub antipode: Vec<(usize, usize, Scalar)>,
}

pub struct HopfAlgebra {
    name: String,
    field: Field,
    labels: Vec<String>,
    unit: SparseVec,
    counit: Vec<Scalar>,
    mult: Vec<OnceLock<SparseVec>>,
    comult: Vec<OnceLock<SparseVec>>,
    antipode: Vec<OnceLock<SparseVec>>,
    antipode_inverse: OnceLock<Option<LinearMap>>,
    presentation: Option<Presentation>,
    metadata: BTreeMap<String, String>,
}

impl fmt::Debug for HopfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HopfAlgebra({}, dim {}, {})", self.name, self.dim(), self.field)
    }
}

/// Basis dimension up to which verification is exhaustive even when a
/// presentation is available.
pub const EXHAUSTIVE_LIMIT: usize = 64;

fn verified_registry() -> &'static Mutex<HashSet<[u8; 32]>> {
    static REG: OnceLock<Mutex<HashSet<[u8; 32]>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashSet::new()))
}

fn filled(v: Vec<SparseVec>) -> Vec<OnceLock<SparseVec>> {
    v.into_iter().map(OnceLock::from).collect()
}

fn empty_cells(n: usize) -> Vec<OnceLock<SparseVec>> {
    (0..n).map(|_| OnceLock::new()).collect()
}

impl HopfAlgebra {
    /// Builds from explicit tables without verifying the axioms.
    pub fn from_tables_unchecked(name: impl Into<String>, t: Tables) -> Result<HopfAlgebra> {
        let n = t.labels.len();
        if n == 0 {
            return Err(Error::dim("Hopf algebra must have positive dimension"));
        }
        let bad = |what: &str, idx: usize| Error::dim(format!("{what} index {idx} out of range for dim {n}"));
        let mut mult: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n * n];
        for (i, j, k, c) in t.mult {
            for x in [i, j, k] {
                if x >= n {
                    return Err(bad("mult", x));
                }
            }
            mult[i * n + j].push((k, c));
        }
        let mut comult: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for (i, j, k, c) in t.comult {
            for x in [i, j, k] {
                if x >= n {
                    return Err(bad("comult", x));
                }
            }
            comult[i].push((j * n + k, c));
        }
        let mut antipode: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for (r, c, x) in t.antipode {
            if r >= n || c >= n {
                return Err(bad("antipode", r.max(c)));
            }
            antipode[c].push((r, x));
        }
        let mut counit = vec![t.field.zero(); n];
        for (i, c) in t.counit {
            if i >= n {
                return Err(bad("counit", i));
            }
            counit[i] = &counit[i] + &c;
        }
        for (i, _) in &t.unit {
            if *i >= n {
                return Err(bad("unit", *i));
            }
        }
        for c in mult
            .iter()
            .flatten()
            .chain(comult.iter().flatten())
            .chain(antipode.iter().flatten())
            .map(|(_, c)| c)
            .chain(counit.iter())
        {
            if c.field() != &t.field {
                return Err(Error::FieldMismatch {
                    left: t.field.to_string(),
                    right: c.field().to_string(),
                });
            }
        }
        Ok(HopfAlgebra {
            name: name.into(),
            unit: SparseVec::from_entries(t.unit),
            counit,
            mult: filled(mult.into_iter().map(SparseVec::from_entries).collect()),
            comult: filled(comult.into_iter().map(SparseVec::from_entries).collect()),
            antipode: filled(antipode.into_iter().map(SparseVec::from_entries).collect()),
            antipode_inverse: OnceLock::new(),
            field: t.field,
            labels: t.labels,
            presentation: None,
            metadata: BTreeMap::new(),
        })
    }

    /// Builds from explicit tables and verifies the Hopf axioms.
    pub fn from_tables(name: impl Into<String>, t: Tables) -> Result<Arc<HopfAlgebra>> {
        HopfAlgebra::from_tables_unchecked(name, t)?.checked()
    }

    /// Builds a lazily tabulated algebra from a presentation (unverified).
    pub fn from_presentation_unchecked(
        name: impl Into<String>,
        field: &Field,
        labels: Vec<String>,
        presentation: Presentation,
    ) -> Result<HopfAlgebra> {
        let n = labels.len();
        if presentation.witness.len() != n {
            return Err(Error::dim("one witness per basis element required"));
        }
        let units: Vec<usize> = (0..n).filter(|&i| presentation.witness[i].is_none()).collect();
        if units.len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "presentation must mark exactly one unit, found {}",
                units.len()
            )));
        }
        let g = presentation.generators.len();
        if presentation.coproduct.len() != g
            || presentation.antipode.len() != g
            || presentation.counit.len() != g
        {
            return Err(Error::dim("generator data length mismatch"));
        }
        let counit = presentation_counit(&presentation, field, n)?;
        Ok(HopfAlgebra {
            name: name.into(),
            field: field.clone(),
            unit: SparseVec::unit(units[0], field),
            counit,
            mult: empty_cells(n * n),
            comult: empty_cells(n),
            antipode: empty_cells(n),
            antipode_inverse: OnceLock::new(),
            labels,
            presentation: Some(presentation),
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Verifies the axioms (memoized by content hash) and wraps in an `Arc`.
    pub fn checked(self) -> Result<Arc<HopfAlgebra>> {
        let key = self.fingerprint();
        if verified_registry().lock().expect("registry").contains(&key) {
            return Ok(Arc::new(self));
        }
        let report = self.verify_axioms();
        if !report.all_passed() {
            return Err(Error::Verification(Box::new(report)));
        }
        verified_registry().lock().expect("registry").insert(key);
        Ok(Arc::new(self))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn is_explicit(&self) -> bool {
        self.presentation.is_none()
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn counit(&self) -> &[Scalar] {
        &self.counit
    }

    pub fn one(&self) -> Scalar {
        self.field.one()
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        SparseVec::unit(i, &self.field)
    }

    pub fn counit_of(&self, x: &SparseVec) -> Scalar {
        x.dot_dense(&self.counit, &self.field)
    }

    /// `e_i * e_j`
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        let n = self.dim();
        self.mult[i * n + j].get_or_init(|| self.derive_product(i, j))
    }

    /// Δ(e_i), flattened as `a * dim + b` for `e_a ⊗ e_b`.
    pub fn comul_basis(&self, i: usize) -> &SparseVec {
        self.comult[i].get_or_init(|| self.derive_coproduct(i))
    }

    pub fn antipode_basis(&self, i: usize) -> &SparseVec {
        self.antipode[i].get_or_init(|| self.derive_antipode(i))
    }

    fn derive_product(&self, i: usize, j: usize) -> SparseVec {
        let p = self.presentation.as_ref().expect("explicit tables are filled");
        match &p.witness[i] {
            None => self.basis(j),
            Some(w) => {
                let inner = self.mul_basis(w.rest, j).clone();
                let g = p.generators[w.gen];
                if g == i {
                    // e_g * e_j comes straight from the closed-form action.
                    debug_assert!(w.rest == self.unit_index());
                    return p.action.left_mul(w.gen, j).scale(&w.coeff);
                }
                self.left_mul_vec(g, &inner).scale(&w.coeff)
            }
        }
    }

    fn derive_coproduct(&self, i: usize) -> SparseVec {
        let p = self.presentation.as_ref().expect("explicit tables are filled");
        match &p.witness[i] {
            None => {
                let u = self.unit_index();
                SparseVec::unit(u * self.dim() + u, &self.field)
            }
            Some(w) => {
                let rest = self.comul_basis(w.rest).clone();
                self.mul2(&p.coproduct[w.gen], &rest).scale(&w.coeff)
            }
        }
    }

    fn derive_antipode(&self, i: usize) -> SparseVec {
        let p = self.presentation.as_ref().expect("explicit tables are filled");
        match &p.witness[i] {
            None => self.unit.clone(),
            Some(w) => {
                let rest = self.antipode_basis(w.rest).clone();
                self.mul(&rest, &p.antipode[w.gen]).scale(&w.coeff)
            }
        }
    }

    /// Index of the unit when it is a basis vector.
    pub fn unit_index(&self) -> usize {
        match self.unit.entries() {
            [(i, c)] if c.is_one() => *i,
            _ => panic!("unit of {} is not a basis vector", self.name),
        }
    }

    pub fn unit_is_basis(&self) -> bool {
        matches!(self.unit.entries(), [(_, c)] if c.is_one())
    }

    /// `e_i * x`
    pub fn left_mul_vec(&self, i: usize, x: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(x.iter().map(|(j, c)| (c, self.mul_basis(i, j))))
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut all = Vec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let ab = a * b;
                for (k, c) in self.mul_basis(i, j).iter() {
                    all.push((k, c * &ab));
                }
            }
        }
        SparseVec::from_entries(all)
    }

    pub fn comul(&self, x: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(x.iter().map(|(i, c)| (c, self.comul_basis(i))))
    }

    pub fn antipode(&self, x: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(x.iter().map(|(i, c)| (c, self.antipode_basis(i))))
    }

    /// Product in H ⊗ H.
    pub fn mul2(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let n = self.dim();
        let mut all = Vec::new();
        for (i, a) in x.iter() {
            let (i1, i2) = (i / n, i % n);
            for (j, b) in y.iter() {
                let (j1, j2) = (j / n, j % n);
                let ab = a * b;
                let p = self.mul_basis(i1, j1);
                let q = self.mul_basis(i2, j2);
                for (k1, c1) in p.iter() {
                    let c1 = c1 * &ab;
                    for (k2, c2) in q.iter() {
                        all.push((k1 * n + k2, &c1 * c2));
                    }
                }
            }
        }
        SparseVec::from_entries(all)
    }

    /// Product in H ⊗ H ⊗ H.
    pub fn mul3(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let n = self.dim();
        let mut all = Vec::new();
        for (i, a) in x.iter() {
            let (i1, i2, i3) = (i / (n * n), (i / n) % n, i % n);
            for (j, b) in y.iter() {
                let (j1, j2, j3) = (j / (n * n), (j / n) % n, j % n);
                let ab = a * b;
                for (k1, c1) in self.mul_basis(i1, j1).iter() {
                    let c1 = c1 * &ab;
                    for (k2, c2) in self.mul_basis(i2, j2).iter() {
                        let c12 = &c1 * c2;
                        for (k3, c3) in self.mul_basis(i3, j3).iter() {
                            all.push(((k1 * n + k2) * n + k3, &c12 * c3));
                        }
                    }
                }
            }
        }
        SparseVec::from_entries(all)
    }

    /// (Δ ⊗ id) on H ⊗ H.
    pub fn comul_left(&self, t: &SparseVec) -> SparseVec {
        let n = self.dim();
        let mut all = Vec::new();
        for (ij, c) in t.iter() {
            let (i, j) = (ij / n, ij % n);
            for (ab, d) in self.comul_basis(i).iter() {
                all.push((ab * n + j, c * d));
            }
        }
        SparseVec::from_entries(all)
    }

    /// (id ⊗ Δ) on H ⊗ H.
    pub fn comul_right(&self, t: &SparseVec) -> SparseVec {
        let n = self.dim();
        let mut all = Vec::new();
        for (ij, c) in t.iter() {
            let (i, j) = (ij / n, ij % n);
            for (ab, d) in self.comul_basis(j).iter() {
                all.push((i * n * n + ab, c * d));
            }
        }
        SparseVec::from_entries(all)
    }

    /// Δ(x) followed by (Δ ⊗ id): the iterated coproduct x_1 ⊗ x_2 ⊗ x_3.
    pub fn comul3(&self, x: &SparseVec) -> SparseVec {
        self.comul_left(&self.comul(x))
    }

    /// Antipode as a linear map (materializes every column).
    pub fn antipode_map(&self) -> LinearMap {
        LinearMap::from_fn(&self.field, self.dim(), self.dim(), |i| {
            self.antipode_basis(i).clone()
        })
    }

    /// Inverse of the antipode, or `None` when the antipode is singular.
    pub fn antipode_inverse(&self) -> Option<&LinearMap> {
        self.antipode_inverse
            .get_or_init(|| self.antipode_map().invert().ok())
            .as_ref()
    }

    /// Forces every lazily derived table entry.
    pub fn materialize(&self) {
        let n = self.dim();
        (0..n).into_par_iter().for_each(|i| {
            for j in 0..n {
                self.mul_basis(i, j);
            }
        });
        for i in 0..n {
            self.comul_basis(i);
            self.antipode_basis(i);
        }
    }

    /// Left multiplication by `x` as a linear map.
    pub fn left_mul_map(&self, x: &SparseVec) -> LinearMap {
        LinearMap::from_fn(&self.field, self.dim(), self.dim(), |j| {
            self.mul(x, &self.basis(j))
        })
    }

    /// Explicit table dump: mult, comult and antipode triples plus unit and counit.
    pub fn to_tables(&self) -> Tables {
        let n = self.dim();
        let mut mult = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.mul_basis(i, j).iter() {
                    mult.push((i, j, k, c.clone()));
                }
            }
        }
        let mut comult = Vec::new();
        let mut antipode = Vec::new();
        for i in 0..n {
            for (ab, c) in self.comul_basis(i).iter() {
                comult.push((i, ab / n, ab % n, c.clone()));
            }
            for (r, c) in self.antipode_basis(i).iter() {
                antipode.push((r, i, c.clone()));
            }
        }
        Tables {
            field: self.field.clone(),
            labels: self.labels.clone(),
            mult,
            unit: self.unit.iter().map(|(i, c)| (i, c.clone())).collect(),
            comult,
            counit: self
                .counit
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
            antipode,
        }
    }

    /// Explicit copy of a lazily tabulated algebra.
    pub fn to_explicit(&self) -> Result<HopfAlgebra> {
        let mut h = HopfAlgebra::from_tables_unchecked(self.name.clone(), self.to_tables())?;
        h.metadata = self.metadata.clone();
        Ok(h)
    }

    /// SHA-256 over the content: all tables for explicit algebras, the
    /// name, field and labels for presented ones.
    pub fn fingerprint(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.field.to_string().as_bytes());
        for l in &self.labels {
            h.update(l.as_bytes());
            h.update([0u8]);
        }
        match &self.presentation {
            Some(_) => {
                h.update(b"presented:");
                h.update(self.name.as_bytes());
                for (k, v) in &self.metadata {
                    h.update(k.as_bytes());
                    h.update(v.as_bytes());
                }
            }
            None => {
                let n = self.dim();
                let mut put = |tag: &str, v: &SparseVec| {
                    h.update(tag.as_bytes());
                    for (i, c) in v.iter() {
                        h.update(i.to_le_bytes());
                        h.update(c.to_string().as_bytes());
                        h.update([0u8]);
                    }
                };
                for i in 0..n * n {
                    put("m", self.mul_basis(i / n, i % n));
                }
                for i in 0..n {
                    put("d", self.comul_basis(i));
                    put("s", self.antipode_basis(i));
                }
                put("u", &self.unit);
                put("e", &SparseVec::from_dense(&self.counit));
            }
        }
        h.finalize().into()
    }

    /// Runs the seven Hopf axioms plus antipode invertibility. Uses the
    /// presentation when one is available and the dimension exceeds
    /// [`EXHAUSTIVE_LIMIT`].
    pub fn verify_axioms(&self) -> Report {
        if self.presentation.is_some() && self.dim() > EXHAUSTIVE_LIMIT {
            self.verify_presentation()
        } else {
            self.verify_exhaustive()
        }
    }

    /// Checks every axiom on every tuple of basis elements.
    pub fn verify_exhaustive(&self) -> Report {
        let n = self.dim();
        let mut r = Report::new(format!("{} (exhaustive)", self.name));
        let name_ij = |i: usize, j: usize| format!("{}, {}", self.labels[i], self.labels[j]);

        let assoc = (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for k in 0..n {
                    let left = SparseVec::linear_combination(
                        ij.iter().map(|(m, c)| (c, self.mul_basis(m, k))),
                    );
                    let right = self.left_mul_vec(i, self.mul_basis(j, k));
                    if left != right {
                        return Some(format!(
                            "({}) * {} != {} * ({})",
                            name_ij(i, j),
                            self.labels[k],
                            self.labels[i],
                            name_ij(j, k)
                        ));
                    }
                }
            }
            None
        });
        r.push(Check::from_witness("associativity", assoc));

        let unit = (0..n).find_map(|i| {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e {
                Some(format!("1 * {} != {}", self.labels[i], self.labels[i]))
            } else if self.mul(&e, &self.unit) != e {
                Some(format!("{} * 1 != {}", self.labels[i], self.labels[i]))
            } else {
                None
            }
        });
        r.push(Check::from_witness("unit", unit));

        let coassoc = (0..n).into_par_iter().find_map_first(|i| {
            let d = self.comul_basis(i);
            (self.comul_left(d) != self.comul_right(d)).then(|| self.labels[i].clone())
        });
        r.push(Check::from_witness("coassociativity", coassoc));

        r.push(Check::from_witness("counit", (0..n).find_map(|i| self.counit_witness(i))));

        let dmul = (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let left = self.comul(self.mul_basis(i, j));
                let right = self.mul2(self.comul_basis(i), self.comul_basis(j));
                if left != right {
                    return Some(name_ij(i, j));
                }
            }
            None
        });
        let dunit = {
            let u = self.comul(&self.unit);
            let uu = crate::linalg::tensor_vec(&self.unit, &self.unit, n);
            (u != uu).then(|| "Δ(1) != 1 ⊗ 1".to_string())
        };
        r.push(Check::from_witness("comultiplication_multiplicative", dmul.or(dunit)));

        let emul = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| {
                self.counit_of(self.mul_basis(i, j)) != &self.counit[i] * &self.counit[j]
            })
            .map(|(i, j)| name_ij(i, j))
            .or_else(|| (!self.counit_of(&self.unit).is_one()).then(|| "ε(1) != 1".into()));
        r.push(Check::from_witness("counit_multiplicative", emul));

        r.push(Check::from_witness(
            "antipode",
            (0..n).find_map(|i| self.antipode_witness(i)),
        ));

        let inv = (self.antipode_inverse().is_none()).then(|| "S is singular".to_string());
        r.push(Check::from_witness("antipode_invertible", inv));
        r
    }

    fn counit_witness(&self, i: usize) -> Option<String> {
        let n = self.dim();
        let d = self.comul_basis(i);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (ab, c) in d.iter() {
            let (a, b) = (ab / n, ab % n);
            if !self.counit[a].is_zero() {
                left.push((b, c * &self.counit[a]));
            }
            if !self.counit[b].is_zero() {
                right.push((a, c * &self.counit[b]));
            }
        }
        let e = self.basis(i);
        if SparseVec::from_entries(left) != e || SparseVec::from_entries(right) != e {
            Some(self.labels[i].clone())
        } else {
            None
        }
    }

    fn antipode_witness_vec(&self, x: &SparseVec, label: &str) -> Option<String> {
        let n = self.dim();
        let d = self.comul(x);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (ab, c) in d.iter() {
            let (a, b) = (ab / n, ab % n);
            for (k, s) in self.mul(self.antipode_basis(a), &self.basis(b)).iter() {
                left.push((k, s * c));
            }
            for (k, s) in self.mul(&self.basis(a), self.antipode_basis(b)).iter() {
                right.push((k, s * c));
            }
        }
        let expected = self.unit.scale(&self.counit_of(x));
        if SparseVec::from_entries(left) != expected {
            Some(format!("S({label}_1) {label}_2 != ε({label}) 1"))
        } else if SparseVec::from_entries(right) != expected {
            Some(format!("{label}_1 S({label}_2) != ε({label}) 1"))
        } else {
            None
        }
    }

    fn antipode_witness(&self, i: usize) -> Option<String> {
        self.antipode_witness_vec(&self.basis(i), &self.labels[i])
    }

    /// Verification through the presentation: relations on the generator
    /// operators and images, axioms on generators, witness consistency.
    pub fn verify_presentation(&self) -> Report {
        let p = self
            .presentation
            .as_ref()
            .expect("verify_presentation requires a presentation");
        let n = self.dim();
        let f = &self.field;
        let mut r = Report::new(format!("{} (presentation)", self.name));
        let gname = |g: usize| p.generator_names[g].clone();

        // Relations as operators on the basis: the left regular action factors
        // through the presented algebra.
        let ops = p.relations.par_iter().enumerate().find_map_first(|(ri, rel)| {
            for k in 0..n {
                let mut total = Vec::new();
                for t in rel {
                    let mut v = self.basis(k);
                    for &g in t.word.iter().rev() {
                        v = self.left_mul_vec(p.generators[g], &v);
                    }
                    for (i, c) in v.iter() {
                        total.push((i, c * &t.coeff));
                    }
                }
                if !SparseVec::from_entries(total).is_zero() {
                    return Some(format!("relation {ri} fails on {}", self.labels[k]));
                }
            }
            None
        });
        let u = self.unit_index();
        let wit = (0..n).find_map(|i| {
            (self.mul_basis(i, u) != &self.basis(i))
                .then(|| format!("{} * 1 != {}", self.labels[i], self.labels[i]))
        });
        let gens = p.generators.iter().enumerate().find_map(|(g, &gi)| match &p.witness[gi] {
            Some(w) if w.gen == g && w.rest == u && w.coeff.is_one() => None,
            _ => Some(format!("generator {} must be witnessed as itself", gname(g))),
        });
        r.push(Check::from_witness("associativity", ops.or(gens).or(wit.clone())));
        r.push(Check::from_witness("unit", wit));

        // Δ on generators satisfies the relations in H ⊗ H.
        let one2 = SparseVec::unit(u * n + u, f);
        let eval2 = |word: &[usize]| -> SparseVec {
            let mut v = one2.clone();
            for &g in word.iter().rev() {
                v = self.mul2(&p.coproduct[g], &v);
            }
            v
        };
        let drel = p.relations.iter().enumerate().find_map(|(ri, rel)| {
            let images: Vec<SparseVec> = rel.iter().map(|t| eval2(&t.word)).collect();
            let total = SparseVec::linear_combination(rel.iter().map(|t| &t.coeff).zip(&images));
            (!total.is_zero()).then(|| format!("Δ violates relation {ri}"))
        });
        r.push(Check::from_witness("comultiplication_multiplicative", drel));

        let erel = p.relations.iter().enumerate().find_map(|(ri, rel)| {
            let mut total = f.zero();
            for t in rel {
                let mut v = t.coeff.clone();
                for &g in &t.word {
                    v = &v * &p.counit[g];
                }
                total = &total + &v;
            }
            (!total.is_zero()).then(|| format!("ε violates relation {ri}"))
        });
        r.push(Check::from_witness("counit_multiplicative", erel));

        let coassoc = p.generators.iter().enumerate().find_map(|(g, _)| {
            let d = &p.coproduct[g];
            (self.comul_left(d) != self.comul_right(d)).then(|| gname(g))
        });
        r.push(Check::from_witness("coassociativity", coassoc));

        let counit = p.generators.iter().enumerate().find_map(|(g, &gi)| {
            (self.comul_basis(gi) != &p.coproduct[g] || self.counit[gi] != p.counit[g])
                .then(|| format!("{} tables disagree with generator data", gname(g)))
                .or_else(|| self.counit_witness(gi))
        });
        r.push(Check::from_witness("counit", counit));

        // S reverses the relations; the antipode law on generators then
        // propagates to all products.
        let srel = p.relations.iter().enumerate().find_map(|(ri, rel)| {
            let mut total = Vec::new();
            for t in rel {
                let mut v = self.unit.clone();
                for &g in &t.word {
                    v = self.mul(&p.antipode[g], &v);
                }
                for (i, c) in v.iter() {
                    total.push((i, c * &t.coeff));
                }
            }
            (!SparseVec::from_entries(total).is_zero())
                .then(|| format!("S violates reversed relation {ri}"))
        });
        let slaw = p.generators.iter().enumerate().find_map(|(g, &gi)| {
            (self.antipode_basis(gi) != &p.antipode[g])
                .then(|| format!("S({}) table mismatch", gname(g)))
                .or_else(|| self.antipode_witness(gi))
        });
        r.push(Check::from_witness("antipode", srel.or(slaw)));
        r
    }

    /// Δ(g) = g ⊗ g and ε(g) = 1.
    pub fn check_grouplike(&self, g: &SparseVec) -> bool {
        if !self.counit_of(g).is_one() {
            return false;
        }
        self.comul(g) == crate::linalg::tensor_vec(g, g, self.dim())
    }

    /// Human-readable form such as `K^2` or `1/2*E - (z + 1)*F`.
    pub fn format_element(&self, v: &SparseVec) -> String {
        format_vector(v, &self.labels)
    }

    /// Parses an element expression over the basis labels.
    pub fn parse_element(&self, s: &str) -> Result<SparseVec> {
        parse_vector(s, &self.labels, &self.field, &self.unit)
    }
}

fn presentation_counit(p: &Presentation, field: &Field, n: usize) -> Result<Vec<Scalar>> {
    let mut out: Vec<Option<Scalar>> = vec![None; n];
    fn go(p: &Presentation, field: &Field, i: usize, out: &mut Vec<Option<Scalar>>, depth: usize) -> Result<Scalar> {
        if let Some(v) = &out[i] {
            return Ok(v.clone());
        }
        if depth > out.len() {
            return Err(Error::InvalidParameter("witness chain is cyclic".into()));
        }
        let v = match &p.witness[i] {
            None => field.one(),
            Some(w) => {
                if w.gen >= p.counit.len() || w.rest >= out.len() {
                    return Err(Error::dim("witness index out of range"));
                }
                &(&w.coeff * &p.counit[w.gen]) * &go(p, field, w.rest, out, depth + 1)?
            }
        };
        out[i] = Some(v.clone());
        Ok(v)
    }
    for i in 0..n {
        go(p, field, i, &mut out, 0)?;
    }
    Ok(out.into_iter().map(|v| v.expect("filled")).collect())
}

/// Formats `sum c_i * label_i`.
pub fn format_vector(v: &SparseVec, labels: &[String]) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in v.iter() {
        let s = c.to_string();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) if !rest.contains([' ']) => (true, rest.to_string()),
            _ => (false, s.clone()),
        };
        let coeff = if body.contains(' ') {
            format!("({body})")
        } else {
            body
        };
        let term = if coeff == "1" {
            labels[i].clone()
        } else {
            format!("{coeff}*{}", labels[i])
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    out
}

/// Splits at top-level `+`/`-` that are not exponent signs.
fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let is_sep = depth == 0
            && (ch == '+' || ch == '-')
            && !matches!(prev, Some('^') | Some('*') | Some('/'));
        if is_sep {
            if !cur.trim().is_empty() {
                terms.push((neg, cur.trim().to_string()));
            }
            cur.clear();
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur.trim().to_string()));
    }
    terms
}

/// Parses an element expression: terms `label`, `scalar*label`, or a bare
/// scalar (a multiple of the unit), joined by `+` and `-`.
pub fn parse_vector(s: &str, labels: &[String], field: &Field, unit: &SparseVec) -> Result<SparseVec> {
    let lookup = |l: &str| labels.iter().position(|x| x == l);
    let mut all = Vec::new();
    let terms = split_terms(s);
    if terms.is_empty() {
        return Err(Error::parse(format!("element {s:?}"), "empty expression"));
    }
    for (neg, t) in terms {
        let sign = if neg { -field.one() } else { field.one() };
        if t == "0" {
            continue;
        }
        if let Some(i) = lookup(&t) {
            all.push((i, sign));
            continue;
        }
        if let Some(pos) = t.rfind('*') {
            let (c, l) = (t[..pos].trim(), t[pos + 1..].trim());
            if let Some(i) = lookup(l) {
                let c = field.parse(c)?;
                all.push((i, &sign * &c));
                continue;
            }
        }
        match field.parse(&t) {
            Ok(c) => {
                let c = &sign * &c;
                for (i, u) in unit.iter() {
                    all.push((i, u * &c));
                }
            }
            Err(_) => {
                return Err(Error::parse(
                    format!("element {s:?}"),
                    format!("unknown basis label or scalar in term {t:?}"),
                ))
            }
        }
    }
    Ok(SparseVec::from_entries(all))
}

/// Labels `x^k` with the conventions `x^0 = ""`, `x^1 = "x"`.
pub fn power_label(sym: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => sym.to_string(),
        _ => format!("{sym}^{k}"),
    }
}

/// Joins monomial factors, using `1` for the empty product.
pub fn monomial_label(parts: &[String]) -> String {
    let s: String = parts.concat();
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// The dual Hopf algebra H* on the dual basis, labelled `d[label]`.
pub fn dual(h: &HopfAlgebra) -> Result<Arc<HopfAlgebra>> {
    let n = h.dim();
    let mut mult = Vec::new();
    let mut comult = Vec::new();
    let mut antipode = Vec::new();
    for k in 0..n {
        for (ij, c) in h.comul_basis(k).iter() {
            mult.push((ij / n, ij % n, k, c.clone()));
        }
    }
    for j in 0..n {
        for k in 0..n {
            for (i, c) in h.mul_basis(j, k).iter() {
                comult.push((i, j, k, c.clone()));
            }
        }
    }
    for c in 0..n {
        for (r, x) in h.antipode_basis(c).iter() {
            // S*(d_r) = sum_c S_{r c} d_c, so entry (c, r) in the dual matrix
            antipode.push((c, r, x.clone()));
        }
    }
    let t = Tables {
        field: h.field().clone(),
        labels: h.labels().iter().map(|l| format!("d[{l}]")).collect(),
        mult,
        unit: h
            .counit()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect(),
        comult,
        counit: h.unit().iter().map(|(i, c)| (i, c.clone())).collect(),
        antipode,
    };
    HopfAlgebra::from_tables(format!("dual_of({})", h.name()), t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kz2() -> Tables {
        let f = Field::rational();
        let one = f.one();
        Tables {
            field: f.clone(),
            labels: vec!["1".into(), "g".into()],
            mult: vec![
                (0, 0, 0, one.clone()),
                (0, 1, 1, one.clone()),
                (1, 0, 1, one.clone()),
                (1, 1, 0, one.clone()),
            ],
            unit: vec![(0, one.clone())],
            comult: vec![(0, 0, 0, one.clone()), (1, 1, 1, one.clone())],
            counit: vec![(0, one.clone()), (1, one.clone())],
            antipode: vec![(0, 0, one.clone()), (1, 1, one)],
        }
    }

    #[test]
    fn group_algebra_passes() {
        let h = HopfAlgebra::from_tables("kZ2", kz2()).unwrap();
        assert!(h.verify_axioms().all_passed());
        assert!(h.check_grouplike(&h.basis(1)));
        assert!(h.check_grouplike(&h.basis(0)));
        assert!(!h.check_grouplike(&SparseVec::new()));
    }

    #[test]
    fn zero_antipode_fails_with_witness() {
        let mut t = kz2();
        t.antipode.clear();
        let h = HopfAlgebra::from_tables_unchecked("broken", t.clone()).unwrap();
        let r = h.verify_axioms();
        let c = r.get("antipode").unwrap();
        assert!(!c.passed);
        assert!(c.witness.is_some());
        assert!(HopfAlgebra::from_tables("broken", t).is_err());
    }

    #[test]
    fn dual_of_kz2_and_double_dual() {
        let h = HopfAlgebra::from_tables("kZ2", kz2()).unwrap();
        let d = dual(&h).unwrap();
        assert_eq!(d.dim(), 2);
        // functions on Z2: orthogonal idempotents summing to the unit
        assert!(d.mul_basis(0, 1).is_zero());
        assert_eq!(d.mul_basis(1, 1), &d.basis(1));
        let dd = dual(&d).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(dd.mul_basis(i, j), h.mul_basis(i, j));
            }
            assert_eq!(dd.comul_basis(i), h.comul_basis(i));
            assert_eq!(dd.antipode_basis(i), h.antipode_basis(i));
        }
        assert_eq!(dd.unit(), h.unit());
        assert_eq!(dd.counit(), h.counit());
    }

    #[test]
    fn element_parsing_and_formatting() {
        let h = HopfAlgebra::from_tables("kZ2", kz2()).unwrap();
        let v = h.parse_element("1/2*g - 3").unwrap();
        assert_eq!(h.format_element(&v), "-3*1 + 1/2*g");
        assert_eq!(h.parse_element(&h.format_element(&v)).unwrap(), v);
        assert!(h.parse_element("h").is_err());
        assert_eq!(h.parse_element("g + g").unwrap(), h.basis(1).scale(&h.field().from_int(2)));
    }

    #[test]
    fn bad_indices_rejected() {
        let mut t = kz2();
        t.mult.push((0, 5, 0, t.field.one()));
        assert!(matches!(
            HopfAlgebra::from_tables_unchecked("x", t),
            Err(Error::Dimension(_))
        ));
    }
}
