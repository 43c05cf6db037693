//! Finite-dimensional algebras given by structure constants, with a linear
//! involution, and the products built on top of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("algebra mismatch: element of dimension {got}, algebra of dimension {expected}")]
    Mismatch { expected: usize, got: usize },
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("nested product needs at least 2 arguments, got {0}")]
    TooFewArguments(usize),
    #[error("arity must be at least 2, got {0}")]
    BadArity(usize),
    #[error("insertion position {k} out of range 1..={n}")]
    PositionOutOfRange { k: usize, n: usize },
}

/// Coordinate vector relative to an algebra's basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element(Vec<Rational>);

impl Element {
    pub fn zero(dim: usize) -> Self {
        Element(vec![Rational::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_coords(coords: Vec<Rational>) -> Self {
        Element(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Element(coords.iter().map(|&x| Rational::from_int(x)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Element {
        Element(self.0.iter().map(|x| x * s).collect())
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &Rational, other: &Element) {
        if s.is_zero() {
            return;
        }
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            if !y.is_zero() {
                *x += &(s * y);
            }
        }
    }

    /// Indices with nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.0.iter().enumerate().filter(|(_, x)| !x.is_zero())
    }

    /// Random element with small rational coordinates.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Element {
        Element(
            (0..dim)
                .map(|_| Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
                .collect(),
        )
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension");
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension");
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element(self.0.iter().map(|x| -x).collect())
    }
}

/// Number of factors in a nested Jordan product; always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arity(usize);

impl Arity {
    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::BadArity(n));
        }
        Ok(Arity(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

type SparseVec = Vec<(usize, Rational)>;

fn sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// An algebra over ℚ determined by its structure constants, unit and a
/// linear involution.
///
/// Construction only checks shapes; the algebraic axioms are checked by
/// [`StructureAlgebra::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct StructureAlgebra {
    name: String,
    basis_names: Vec<String>,
    /// `products[i * dim + j]` holds the nonzero coordinates of `b_i b_j`.
    products: Vec<SparseVec>,
    unit: Element,
    /// Column `j` holds the coordinates of `b_j*`.
    involution: RatMatrix,
    idempotents: BTreeMap<String, Element>,
}

impl fmt::Debug for StructureAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructureAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("basis", &self.basis_names)
            .finish_non_exhaustive()
    }
}

impl StructureAlgebra {
    /// `table[i][j]` is the coordinate vector of `b_i b_j`.
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        table: Vec<Vec<Vec<Rational>>>,
        unit: Vec<Rational>,
        involution: RatMatrix,
    ) -> Result<Self, AlgebraError> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(AlgebraError::Malformed("empty basis".into()));
        }
        if table.len() != dim {
            return Err(AlgebraError::Malformed(format!("table has {} rows, expected {dim}", table.len())));
        }
        let mut products = Vec::with_capacity(dim * dim);
        for (i, row) in table.iter().enumerate() {
            if row.len() != dim {
                return Err(AlgebraError::Malformed(format!("table row {i} has {} entries", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != dim {
                    return Err(AlgebraError::Malformed(format!(
                        "table entry [{i}][{j}] has length {}",
                        v.len()
                    )));
                }
                products.push(sparse(v));
            }
        }
        if unit.len() != dim {
            return Err(AlgebraError::Malformed(format!("unit has length {}", unit.len())));
        }
        if involution.rows() != dim || involution.cols() != dim {
            return Err(AlgebraError::Malformed(format!(
                "involution is {}x{}",
                involution.rows(),
                involution.cols()
            )));
        }
        Ok(StructureAlgebra {
            name: name.into(),
            basis_names,
            products,
            unit: Element(unit),
            involution,
            idempotents: BTreeMap::new(),
        })
    }

    /// Attaches a named distinguished element (metadata only).
    pub fn with_idempotent(mut self, name: impl Into<String>, e: Element) -> Result<Self, AlgebraError> {
        self.check(&e)?;
        self.idempotents.insert(name.into(), e);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    pub fn idempotents(&self) -> &BTreeMap<String, Element> {
        &self.idempotents
    }

    pub fn idempotent(&self, name: &str) -> Option<&Element> {
        self.idempotents.get(name)
    }

    pub fn involution_matrix(&self) -> &RatMatrix {
        &self.involution
    }

    /// Dense coordinate vector of `b_i b_j`.
    pub fn table_entry(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (k, x) in &self.products[i * self.dim() + j] {
            v[*k] = x.clone();
        }
        v
    }

    /// Replaces one structure constant; used to build corrupted fixtures.
    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        let mut v = self.table_entry(i, j);
        v[k] = value;
        let dim = self.dim();
        self.products[i * dim + j] = sparse(&v);
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.dim())
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(self.dim(), i)
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim()).map(|i| self.basis(i)).collect()
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<Element, AlgebraError> {
        let e = Element(coords);
        self.check(&e)?;
        Ok(e)
    }

    /// Human-readable form such as `E11 - 2*E12 + 1/2*V1`.
    pub fn format(&self, a: &Element) -> String {
        let mut out = String::new();
        for (i, c) in a.support() {
            let (neg, mag) = (c.is_negative(), c.abs());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(self.basis_name(i));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn check(&self, a: &Element) -> Result<(), AlgebraError> {
        if a.dim() != self.dim() {
            return Err(AlgebraError::Mismatch { expected: self.dim(), got: a.dim() });
        }
        Ok(())
    }

    /// Bilinear product. Panics if either argument has the wrong dimension;
    /// see [`StructureAlgebra::multiply`] for the checked form.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let dim = self.dim();
        assert!(a.dim() == dim && b.dim() == dim, "element dimension");
        let mut out = vec![Rational::zero(); dim];
        for (i, x) in a.support() {
            for (j, y) in b.support() {
                let xy = x * y;
                for (k, c) in &self.products[i * dim + j] {
                    out[*k] += &(&xy * c);
                }
            }
        }
        Element(out)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Applies the involution.
    pub fn star(&self, a: &Element) -> Element {
        Element(self.involution.mul_vec(&a.0))
    }

    pub fn involve(&self, a: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        Ok(self.star(a))
    }

    /// `(a, b, c) = (ab)c - a(bc)`.
    pub fn associator(&self, a: &Element, b: &Element, c: &Element) -> Element {
        &self.mul(&self.mul(a, b), c) - &self.mul(a, &self.mul(b, c))
    }

    /// `a • b = ab + b a*`.
    pub fn jordan(&self, a: &Element, b: &Element) -> Element {
        &self.mul(a, b) + &self.mul(b, &self.star(a))
    }

    pub fn jordan_product(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.jordan(a, b))
    }

    /// Left-nested fold `(((a1 • a2) • a3) ... • an)`.
    pub fn nested_product(&self, args: &[Element]) -> Result<Element, AlgebraError> {
        if args.len() < 2 {
            return Err(AlgebraError::TooFewArguments(args.len()));
        }
        for a in args {
            self.check(a)?;
        }
        Ok(self.nested(args.iter()))
    }

    fn nested<'a>(&self, mut args: impl Iterator<Item = &'a Element>) -> Element {
        let first = args.next().expect("nonempty").clone();
        args.fold(first, |acc, x| self.jordan(&acc, x))
    }

    /// `m(a, …, a, x, y)` with `n - 2` copies of `a`.
    pub fn xi(&self, a: &Element, x: &Element, y: &Element, n: Arity) -> Element {
        let prefix = std::iter::repeat_n(a, n.get() - 2);
        self.nested(prefix.chain([x, y]))
    }

    /// `m(c_1, …, c_n)` with `c_i = 1` for `i ≤ n-2`, `c_{n-1} = u`, `c_n = v`,
    /// and then slot `k` (1-based) overwritten by `w`.
    pub fn insertion(&self, k: usize, w: &Element, u: &Element, v: &Element, n: Arity) -> Result<Element, AlgebraError> {
        let n = n.get();
        if k == 0 || k > n {
            return Err(AlgebraError::PositionOutOfRange { k, n });
        }
        Ok(self.insertion_unchecked(k, w, u, v, n))
    }

    pub(crate) fn insertion_unchecked(&self, k: usize, w: &Element, u: &Element, v: &Element, n: usize) -> Element {
        let slot = |i: usize| -> &Element {
            if i == k {
                w
            } else if i == n {
                v
            } else if i == n - 1 {
                u
            } else {
                &self.unit
            }
        };
        self.nested((1..=n).map(slot))
    }

    /// `L_y` (left) or `R_y` (right) as a matrix.
    pub fn mult_matrix(&self, y: &Element, side: Side) -> RatMatrix {
        let cols: Vec<Vec<Rational>> = (0..self.dim())
            .map(|j| {
                let b = self.basis(j);
                match side {
                    Side::Left => self.mul(y, &b).0,
                    Side::Right => self.mul(&b, y).0,
                }
            })
            .collect();
        RatMatrix::from_columns(self.dim(), &cols)
    }

    /// Exact check of the algebra axioms on basis tuples.
    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let basis = self.basis_elements();
        let mut failures = Vec::new();

        for (i, b) in basis.iter().enumerate() {
            let l = self.mul(&self.unit, b);
            if &l != b {
                failures.push(Failure::new(Axiom::UnitLeft, vec![i], l, b.clone()));
            }
            let r = self.mul(b, &self.unit);
            if &r != b {
                failures.push(Failure::new(Axiom::UnitRight, vec![i], r, b.clone()));
            }
        }

        let sq = self.involution.matmul(&self.involution);
        for j in 0..dim {
            let col = Element(sq.column(j));
            if col != basis[j] {
                failures.push(Failure::new(Axiom::InvolutionSquare, vec![j], col, basis[j].clone()));
            }
        }

        let stars: Vec<Element> = basis.iter().map(|b| self.star(b)).collect();
        for i in 0..dim {
            for j in 0..dim {
                let lhs = self.star(&self.mul(&basis[i], &basis[j]));
                let rhs = self.mul(&stars[j], &stars[i]);
                if lhs != rhs {
                    failures.push(Failure::new(Axiom::AntiAutomorphism, vec![i, j], lhs, rhs));
                }
            }
        }

        let mut associative = true;
        let mut associator_witness = None;
        let mut assoc = vec![Element::zero(dim); dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.mul(&basis[i], &basis[j]);
                for k in 0..dim {
                    let a = &self.mul(&ij, &basis[k]) - &self.mul(&basis[i], &self.mul(&basis[j], &basis[k]));
                    if associative && !a.is_zero() {
                        associative = false;
                        associator_witness = Some(Witness { tuple: vec![i, j, k], value: a.clone() });
                    }
                    assoc[(i * dim + j) * dim + k] = a;
                }
            }
        }
        let at = |i: usize, j: usize, k: usize| &assoc[(i * dim + j) * dim + k];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let left = at(i, j, k) + at(j, i, k);
                    if !left.is_zero() {
                        failures.push(Failure::new(Axiom::LeftAlternative, vec![i, j, k], left, self.zero()));
                    }
                    let right = at(i, j, k) + at(i, k, j);
                    if !right.is_zero() {
                        failures.push(Failure::new(Axiom::RightAlternative, vec![i, j, k], right, self.zero()));
                    }
                }
            }
        }

        let suspect_entries = self.suspects(&failures);
        ValidationReport { failures, associative, associator_witness, suspect_entries }
    }

    /// Ranks table entries by how many failed checks read them directly.
    fn suspects(&self, failures: &[Failure]) -> Vec<SuspectEntry> {
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut bump = |e: (usize, usize)| *counts.entry(e).or_default() += 1;
        for f in failures {
            let t = &f.tuple;
            match f.axiom {
                Axiom::LeftAlternative => {
                    for e in [(t[0], t[1]), (t[1], t[2]), (t[1], t[0]), (t[0], t[2])] {
                        bump(e);
                    }
                }
                Axiom::RightAlternative => {
                    for e in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2]), (t[2], t[1])] {
                        bump(e);
                    }
                }
                Axiom::UnitLeft => {
                    for (k, _) in self.unit.support() {
                        bump((k, t[0]));
                    }
                }
                Axiom::UnitRight => {
                    for (k, _) in self.unit.support() {
                        bump((t[0], k));
                    }
                }
                Axiom::AntiAutomorphism => {
                    bump((t[0], t[1]));
                    let (si, sj) = (self.star(&self.basis(t[0])), self.star(&self.basis(t[1])));
                    for (s, _) in sj.support() {
                        for (r, _) in si.support() {
                            bump((s, r));
                        }
                    }
                }
                Axiom::InvolutionSquare => {}
            }
        }
        let mut ranked: Vec<SuspectEntry> = counts
            .into_iter()
            .map(|((left, right), failed_checks)| SuspectEntry { left, right, failed_checks })
            .collect();
        ranked.sort_by(|a, b| b.failed_checks.cmp(&a.failed_checks).then((a.left, a.right).cmp(&(b.left, b.right))));
        ranked.truncate(5);
        ranked
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    UnitLeft,
    UnitRight,
    InvolutionSquare,
    AntiAutomorphism,
    /// `(u,v,w) + (v,u,w) = 0`
    LeftAlternative,
    /// `(u,v,w) + (u,w,v) = 0`
    RightAlternative,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::UnitLeft => "unit_left",
            Axiom::UnitRight => "unit_right",
            Axiom::InvolutionSquare => "involution_square",
            Axiom::AntiAutomorphism => "anti_automorphism",
            Axiom::LeftAlternative => "left_alternative",
            Axiom::RightAlternative => "right_alternative",
        }
    }
}

/// A basis tuple together with the value computed on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub value: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub axiom: Axiom,
    /// Basis indices the check was evaluated on.
    pub tuple: Vec<usize>,
    pub lhs: Element,
    pub rhs: Element,
}

impl Failure {
    fn new(axiom: Axiom, tuple: Vec<usize>, lhs: Element, rhs: Element) -> Self {
        Failure { axiom, tuple, lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspectEntry {
    pub left: usize,
    pub right: usize,
    pub failed_checks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
    /// Informational: all basis associators vanish.
    pub associative: bool,
    /// First nonzero basis associator in lexicographic order.
    pub associator_witness: Option<Witness>,
    /// Table entries read by the most failed checks, most suspicious first.
    pub suspect_entries: Vec<SuspectEntry>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn arity_rejects_small() {
        assert_eq!(Arity::new(1), Err(AlgebraError::BadArity(1)));
        assert!(Arity::new(2).is_ok());
    }

    #[test]
    fn matrix_units_multiply() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let e = |n: &str| m2.basis(m2.basis_index(n).unwrap());
        assert_eq!(m2.mul(&e("E12"), &e("E21")), e("E11"));
        assert_eq!(m2.mul(&e("E21"), &e("E21")), m2.zero());
        assert_eq!(m2.star(&e("E12")), e("E21"));
        assert_eq!(m2.star(&e("iE11")), -&e("iE11"));
        assert_eq!(m2.jordan(&e("E12"), &e("E21")), e("E11"));
    }

    #[test]
    fn mismatch_is_reported() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let short = Element::zero(3);
        assert_eq!(
            m2.multiply(&short, m2.unit()),
            Err(AlgebraError::Mismatch { expected: 8, got: 3 })
        );
        assert!(m2.jordan_product(m2.unit(), &short).is_err());
        assert!(m2.involve(&short).is_err());
    }

    #[test]
    fn nested_product_base_cases() {
        let z = catalog::zorn_algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (a, b) = (Element::random(8, &mut rng), Element::random(8, &mut rng));
        assert_eq!(z.nested_product(&[a.clone(), b.clone()]).unwrap(), z.jordan(&a, &b));
        assert_eq!(z.nested_product(&[a.clone()]), Err(AlgebraError::TooFewArguments(1)));
        let one = z.unit().clone();
        for n in 2..=6 {
            let ones = vec![one.clone(); n];
            assert_eq!(z.nested_product(&ones).unwrap(), one.scale(&Rational::pow2(n as i32 - 1)));
        }
        let three = z.nested_product(&[one.clone(), a.clone(), b.clone()]).unwrap();
        assert_eq!(three, z.jordan(&a, &b).scale(&q(2)));
        assert_eq!(z.jordan(&a, &one), &a + &z.star(&a));
        assert_eq!(z.jordan(&one, &a), a.scale(&q(2)));
    }

    #[test]
    fn insertion_edges() {
        let z = catalog::zorn_algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (w, u, v) = (Element::random(8, &mut rng), Element::random(8, &mut rng), Element::random(8, &mut rng));
        let one = z.unit().clone();
        for n in 2..=5 {
            let ar = Arity::new(n).unwrap();
            assert_eq!(z.insertion(n - 1, &w, &u, &v, ar).unwrap(), z.xi(&one, &w, &v, ar));
            assert_eq!(z.insertion(n, &w, &u, &v, ar).unwrap(), z.xi(&one, &u, &w, ar));
            assert!(z.insertion(0, &w, &u, &v, ar).is_err());
            assert!(z.insertion(n + 1, &w, &u, &v, ar).is_err());
        }
        // n = 2 ignores the prefix element entirely.
        let two = Arity::new(2).unwrap();
        assert_eq!(z.xi(&w, &u, &v, two), z.jordan(&u, &v));
    }

    #[test]
    fn zorn_cross_product_lands_in_lower_left() {
        let z = catalog::zorn_algebra();
        let v1 = z.basis(z.basis_index("V1").unwrap());
        let v2 = z.basis(z.basis_index("V2").unwrap());
        let w3 = z.basis(z.basis_index("W3").unwrap());
        assert_eq!(z.mul(&v1, &v2), w3);
    }

    #[test]
    fn validation_of_catalog() {
        let z = catalog::zorn_algebra();
        let r = z.validate();
        assert!(r.is_valid(), "{:?}", r.first_failure());
        assert!(!r.associative);
        let w = r.associator_witness.unwrap();
        let (i, j, k) = (w.tuple[0], w.tuple[1], w.tuple[2]);
        assert_eq!(z.associator(&z.basis(i), &z.basis(j), &z.basis(k)), w.value);
        assert!(!w.value.is_zero());

        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let r = m2.validate();
        assert!(r.is_valid() && r.associative && r.associator_witness.is_none());
    }

    #[test]
    fn corrupted_constant_is_located() {
        let mut z = catalog::zorn_algebra();
        let (v1, v2, w3) = (z.basis_index("V1").unwrap(), z.basis_index("V2").unwrap(), z.basis_index("W3").unwrap());
        z.set_structure_constant(v1, v2, w3, q(2));
        let r = z.validate();
        assert!(!r.is_valid());
        assert!(r.failures.iter().any(|f| f.axiom == Axiom::AntiAutomorphism && f.tuple == vec![v1, v2]));
        let top = &r.suspect_entries[0];
        assert_eq!((top.left, top.right), (v1, v2));
    }

    #[test]
    fn broken_unit_and_involution() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let mut bad = m2.clone();
        bad.unit = m2.basis(0);
        let r = bad.validate();
        assert!(r.failures.iter().any(|f| f.axiom == Axiom::UnitLeft));
        assert!(r.failures.iter().any(|f| f.axiom == Axiom::UnitRight));

        let mut bad = m2.clone();
        bad.involution = bad.involution.scale(&q(2));
        let r = bad.validate();
        assert!(r.failures.iter().any(|f| f.axiom == Axiom::InvolutionSquare));
    }

    #[test]
    fn star_properties_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for alg in [catalog::zorn_algebra(), catalog::matrix_star_algebra(2).unwrap()] {
            for _ in 0..20 {
                let a = Element::random(alg.dim(), &mut rng);
                let b = Element::random(alg.dim(), &mut rng);
                assert_eq!(alg.star(&alg.star(&a)), a);
                assert_eq!(alg.star(&alg.mul(&a, &b)), alg.mul(&alg.star(&b), &alg.star(&a)));
                assert!(alg.associator(&a, &b, &a).is_zero(), "flexible law");
                assert!(alg.associator(&a, &a, &b).is_zero(), "left alternative law");
                assert!(alg.associator(&b, &a, &a).is_zero(), "right alternative law");
            }
        }
    }

    #[test]
    fn jordan_is_bilinear() {
        let z = catalog::zorn_algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let (a, b, c) = (Element::random(8, &mut rng), Element::random(8, &mut rng), Element::random(8, &mut rng));
            let s = Rational::new(rng.gen_range(-5..5), rng.gen_range(1..4));
            let mut sa_b = a.scale(&s);
            sa_b = &sa_b + &b;
            let lhs = z.jordan(&sa_b, &c);
            let mut rhs = z.jordan(&b, &c);
            rhs.add_scaled(&s, &z.jordan(&a, &c));
            assert_eq!(lhs, rhs);
            let lhs = z.jordan(&c, &sa_b);
            let mut rhs = z.jordan(&c, &b);
            rhs.add_scaled(&s, &z.jordan(&c, &a));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mult_matrices() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        assert_eq!(m2.mult_matrix(m2.unit(), Side::Left), RatMatrix::identity(8));
        assert!(m2.mult_matrix(&m2.zero(), Side::Right).is_zero());
    }
}
