//! Linear operators on an algebra's coordinate space and the derivation-type
//! predicates evaluated on them.
//!
//! Every law checked here is multilinear once the operator and the involution
//! are linear, so checking basis tuples is complete.

use crate::algebra::{Arity, Element, Side, StructureAlgebra};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// Square matrix acting on coordinates; column `j` is the image of `b_j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearOperator(RatMatrix);

impl LinearOperator {
    pub fn new(m: RatMatrix) -> Self {
        assert_eq!(m.rows(), m.cols(), "operator matrix must be square");
        LinearOperator(m)
    }

    pub fn zero(dim: usize) -> Self {
        LinearOperator(RatMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        LinearOperator(RatMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn apply(&self, a: &Element) -> Element {
        Element::from_coords(self.0.mul_vec(a.coords()))
    }

    /// Image of the `j`-th basis vector.
    pub fn image(&self, j: usize) -> Element {
        Element::from_coords(self.0.column(j))
    }

    /// Row-major flattening: entry `(r, s)` lands at `r * dim + s`.
    pub fn to_vector(&self) -> Vec<Rational> {
        self.0.entries().to_vec()
    }

    pub fn from_vector(dim: usize, v: Vec<Rational>) -> Self {
        LinearOperator(RatMatrix::from_entries(dim, dim, v).expect("vector of length dim²"))
    }

    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator(self.0.matmul(&other.0))
    }

    pub fn add(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator(self.0.sub(&other.0))
    }

    pub fn scale(&self, s: &Rational) -> LinearOperator {
        LinearOperator(self.0.scale(s))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn commutator(&self, other: &LinearOperator) -> LinearOperator {
        self.compose(other).sub(&other.compose(self))
    }
}

pub fn mult_operator(alg: &StructureAlgebra, y: &Element, side: Side) -> LinearOperator {
    LinearOperator(alg.mult_matrix(y, side))
}

/// `Ξ_{y,z} = [L_y, L_z] + [L_y, R_z] + [R_y, R_z]`.
pub fn inner_derivation(alg: &StructureAlgebra, y: &Element, z: &Element) -> LinearOperator {
    let (ly, ry) = (mult_operator(alg, y, Side::Left), mult_operator(alg, y, Side::Right));
    let (lz, rz) = (mult_operator(alg, z, Side::Left), mult_operator(alg, z, Side::Right));
    ly.commutator(&lz).add(&ly.commutator(&rz)).add(&ry.commutator(&rz))
}

/// An argument slot of a witness tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arg {
    Unit,
    Basis(usize),
}

impl Arg {
    pub fn label(self, alg: &StructureAlgebra) -> String {
        match self {
            Arg::Unit => "1".to_string(),
            Arg::Basis(i) => alg.basis_name(i).to_string(),
        }
    }
}

pub(crate) fn basis_args(idx: &[usize]) -> Vec<Arg> {
    idx.iter().map(|&i| Arg::Basis(i)).collect()
}

/// First failing tuple of a law, with both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpWitness {
    pub tuple: Vec<Arg>,
    pub lhs: Element,
    pub rhs: Element,
}

/// Result of a predicate; `None` means the law holds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub witness: Option<OpWitness>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    fn check(tuple: impl FnOnce() -> Vec<Arg>, lhs: Element, rhs: Element) -> Option<Verdict> {
        (lhs != rhs).then(|| Verdict { witness: Some(OpWitness { tuple: tuple(), lhs, rhs }) })
    }
}

/// `D(ab) = D(a)b + aD(b)`, first on the pair `(1, 1)` (which forces
/// `D(1) = 0`), then on all basis pairs.
pub fn is_derivation(alg: &StructureAlgebra, d: &LinearOperator) -> Verdict {
    let one = alg.unit();
    let d_one = d.apply(one);
    if let Some(v) = Verdict::check(|| vec![Arg::Unit, Arg::Unit], d_one.clone(), d_one.scale(&Rational::from_int(2))) {
        return v;
    }
    let basis = alg.basis_elements();
    let images: Vec<Element> = (0..alg.dim()).map(|j| d.image(j)).collect();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = d.apply(&alg.mul(&basis[i], &basis[j]));
            let rhs = &alg.mul(&images[i], &basis[j]) + &alg.mul(&basis[i], &images[j]);
            if let Some(v) = Verdict::check(|| basis_args(&[i, j]), lhs, rhs) {
                return v;
            }
        }
    }
    Verdict::default()
}

/// `D(a*) = D(a)*`, i.e. `Dσ = σD`; the witness tuple is the basis index.
pub fn is_star_map(alg: &StructureAlgebra, d: &LinearOperator) -> Verdict {
    for j in 0..alg.dim() {
        let b = alg.basis(j);
        let lhs = d.apply(&alg.star(&b));
        let rhs = alg.star(&d.apply(&b));
        if let Some(v) = Verdict::check(|| basis_args(&[j]), lhs, rhs) {
            return v;
        }
    }
    Verdict::default()
}

/// `D(a • b) = D(a) • b + a • D(b)` on all basis pairs.
pub fn is_jordan_derivation(alg: &StructureAlgebra, d: &LinearOperator) -> Verdict {
    let basis = alg.basis_elements();
    let images: Vec<Element> = (0..alg.dim()).map(|j| d.image(j)).collect();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = d.apply(&alg.jordan(&basis[i], &basis[j]));
            let rhs = &alg.jordan(&images[i], &basis[j]) + &alg.jordan(&basis[i], &images[j]);
            if let Some(v) = Verdict::check(|| basis_args(&[i, j]), lhs, rhs) {
                return v;
            }
        }
    }
    Verdict::default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JordanMode {
    /// The first `n - 2` arguments are the unit.
    Restricted,
    /// All `n` arguments range over the algebra.
    Full,
}

/// The *-Jordan n-derivation identity for linear `D`.
pub fn jordan_n_identity_holds(alg: &StructureAlgebra, d: &LinearOperator, n: Arity, mode: JordanMode) -> Verdict {
    match mode {
        JordanMode::Restricted => restricted_identity(alg, d, n),
        JordanMode::Full => full_identity(alg, d, n),
    }
}

fn restricted_identity(alg: &StructureAlgebra, d: &LinearOperator, n: Arity) -> Verdict {
    let nn = n.get();
    let one = alg.unit();
    let d_one = d.apply(one);
    let basis = alg.basis_elements();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let (u, v) = (&basis[i], &basis[j]);
            let lhs = d.apply(&alg.xi(one, u, v, n));
            let mut rhs = alg.zero();
            for k in 1..=nn - 2 {
                rhs = &rhs + &alg.insertion_unchecked(k, &d_one, u, v, nn);
            }
            rhs = &rhs + &alg.insertion_unchecked(nn - 1, &d.image(i), u, v, nn);
            rhs = &rhs + &alg.insertion_unchecked(nn, &d.image(j), u, v, nn);
            if let Some(v) = Verdict::check(|| basis_args(&[i, j]), lhs, rhs) {
                return v;
            }
        }
    }
    Verdict::default()
}

fn full_identity(alg: &StructureAlgebra, d: &LinearOperator, n: Arity) -> Verdict {
    let nn = n.get();
    let dim = alg.dim();
    let basis = alg.basis_elements();
    let images: Vec<Element> = (0..dim).map(|j| d.image(j)).collect();
    let mut tuple = vec![0usize; nn];
    loop {
        let args: Vec<Element> = tuple.iter().map(|&t| basis[t].clone()).collect();
        let lhs = d.apply(&alg.nested_product(&args).expect("n >= 2"));
        let mut rhs = alg.zero();
        for k in 0..nn {
            let mut replaced = args.clone();
            replaced[k] = images[tuple[k]].clone();
            rhs = &rhs + &alg.nested_product(&replaced).expect("n >= 2");
        }
        if let Some(v) = Verdict::check(|| basis_args(&tuple), lhs, rhs) {
            return v;
        }
        if !advance(&mut tuple, dim) {
            return Verdict::default();
        }
    }
}

/// Lexicographic odometer over `{0..dim}^len`; returns `false` after the last tuple.
pub(crate) fn advance(tuple: &mut [usize], dim: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return true;
        }
        *slot = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn named(alg: &StructureAlgebra, n: &str) -> Element {
        alg.basis(alg.basis_index(n).unwrap())
    }

    fn ad(alg: &StructureAlgebra, t: &Element) -> LinearOperator {
        mult_operator(alg, t, Side::Left).sub(&mult_operator(alg, t, Side::Right))
    }

    #[test]
    fn multiplication_operators() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        assert_eq!(mult_operator(&m2, m2.unit(), Side::Left), LinearOperator::identity(8));
        assert!(mult_operator(&m2, &m2.zero(), Side::Right).is_zero());
        let l = mult_operator(&m2, &named(&m2, "E11"), Side::Left);
        assert_eq!(l.apply(&named(&m2, "E12")), named(&m2, "E12"));
        assert!(l.apply(&named(&m2, "E21")).is_zero());
    }

    #[test]
    fn inner_derivation_examples() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let (e11, e12, e21, e22) = (named(&m2, "E11"), named(&m2, "E12"), named(&m2, "E21"), named(&m2, "E22"));
        let xi = inner_derivation(&m2, &e11, &e12);
        assert_eq!(xi.apply(&e21), &e11 - &e22);
        // Associative case: Ξ_{y,z} = ad_{[y,z]}.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let (y, z) = (Element::random(8, &mut rng), Element::random(8, &mut rng));
            let bracket = &m2.mul(&y, &z) - &m2.mul(&z, &y);
            assert_eq!(inner_derivation(&m2, &y, &z), ad(&m2, &bracket));
        }
    }

    #[test]
    fn inner_derivations_are_derivations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for alg in [catalog::zorn_algebra(), catalog::matrix_star_algebra(2).unwrap()] {
            for _ in 0..5 {
                let (y, z) = (Element::random(alg.dim(), &mut rng), Element::random(alg.dim(), &mut rng));
                let xi = inner_derivation(&alg, &y, &z);
                assert!(is_derivation(&alg, &xi).holds());
                assert!(inner_derivation(&alg, &y, &y).is_zero());
                assert_eq!(xi, inner_derivation(&alg, &z, &y).scale(&-Rational::one()));
            }
        }
    }

    #[test]
    fn identity_is_not_a_derivation() {
        let z = catalog::zorn_algebra();
        let v = is_derivation(&z, &LinearOperator::identity(8));
        let w = v.witness.unwrap();
        assert_eq!(w.tuple, vec![Arg::Unit, Arg::Unit]);
        assert_eq!(w.lhs, *z.unit());
        assert_eq!(w.rhs, z.unit().scale(&Rational::from_int(2)));
        assert!(is_derivation(&z, &LinearOperator::zero(8)).holds());
        assert!(!jordan_n_identity_holds(&z, &LinearOperator::identity(8), Arity::new(2).unwrap(), JordanMode::Restricted).holds());
        for n in 2..=4 {
            let n = Arity::new(n).unwrap();
            for mode in [JordanMode::Restricted, JordanMode::Full] {
                assert!(jordan_n_identity_holds(&z, &LinearOperator::zero(8), n, mode).holds());
            }
        }
    }

    #[test]
    fn star_map_examples() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        assert!(is_star_map(&m2, &LinearOperator::zero(8)).holds());
        let sigma = LinearOperator::new(m2.involution_matrix().clone());
        assert!(is_star_map(&m2, &sigma).holds());
        let d = ad(&m2, &named(&m2, "E12"));
        assert!(is_derivation(&m2, &d).holds());
        assert!(!is_star_map(&m2, &d).holds());
        // T = i·E11 has T + T* = 0.
        let d = ad(&m2, &named(&m2, "iE11"));
        assert!(is_star_map(&m2, &d).holds());
        assert!(jordan_n_identity_holds(&m2, &d, Arity::new(3).unwrap(), JordanMode::Full).holds());
    }

    #[test]
    fn odometer_visits_all_tuples() {
        let mut t = vec![0, 0, 0];
        let mut count = 1;
        while advance(&mut t, 3) {
            count += 1;
        }
        assert_eq!(count, 27);
        assert_eq!(t, vec![0, 0, 0]);
    }
}
