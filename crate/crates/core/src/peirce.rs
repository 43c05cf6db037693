//! Peirce decomposition relative to a symmetric idempotent.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, StructureAlgebra};
use crate::linalg::{column_space, kernel_basis, RatMatrix, SubspaceBasis};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeirceError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("e is not idempotent: e^2 != e")]
    NotIdempotent { square: Element },
    #[error("e is not symmetric: e* != e")]
    NotSymmetric { star: Element },
    #[error("e is trivial (zero or the unit)")]
    TrivialIdempotent,
    #[error("e(ae) != (ea)e for basis element {basis}")]
    NotFlexible { basis: usize },
}

/// One of the four Peirce blocks `A_ij`, with `i, j ∈ {1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(pub usize, pub usize);

impl Block {
    pub const ALL: [Block; 4] = [Block(1, 1), Block(1, 2), Block(2, 1), Block(2, 2)];

    fn index(self) -> usize {
        (self.0 - 1) * 2 + (self.1 - 1)
    }

    pub fn is_diagonal(self) -> bool {
        self.0 == self.1
    }

    pub fn transpose(self) -> Block {
        Block(self.1, self.0)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}{}", self.0, self.1)
    }
}

/// A validated symmetric idempotent with its Peirce projections.
#[derive(Debug, Clone)]
pub struct PeirceContext<'a> {
    algebra: &'a StructureAlgebra,
    e1: Element,
    e2: Element,
    projections: [RatMatrix; 4],
    blocks: [SubspaceBasis; 4],
}

/// Checks `e² = e`, `e* = e`, `e ∉ {0, 1}` and builds the projections.
pub fn validate_symmetric_idempotent<'a>(
    algebra: &'a StructureAlgebra,
    e: &Element,
) -> Result<PeirceContext<'a>, PeirceError> {
    algebra.check(e)?;
    let square = algebra.mul(e, e);
    if &square != e {
        return Err(PeirceError::NotIdempotent { square });
    }
    let star = algebra.star(e);
    if &star != e {
        return Err(PeirceError::NotSymmetric { star });
    }
    if e.is_zero() || e == algebra.unit() {
        return Err(PeirceError::TrivialIdempotent);
    }

    let dim = algebra.dim();
    let mut cols: [Vec<Vec<Rational>>; 4] = Default::default();
    for j in 0..dim {
        let a = algebra.basis(j);
        let ea = algebra.mul(e, &a);
        let ae = algebra.mul(&a, e);
        let eae = algebra.mul(e, &ae);
        if eae != algebra.mul(&ea, e) {
            return Err(PeirceError::NotFlexible { basis: j });
        }
        let p12 = &ea - &eae;
        let p21 = &ae - &eae;
        let p22 = &(&(&a - &ea) - &ae) + &eae;
        for (slot, v) in cols.iter_mut().zip([eae, p12, p21, p22]) {
            slot.push(v.into_coords());
        }
    }
    let projections = cols.map(|c| RatMatrix::from_columns(dim, &c));
    let blocks = [0, 1, 2, 3].map(|k| column_space(&projections[k]));
    Ok(PeirceContext {
        algebra,
        e1: e.clone(),
        e2: algebra.unit() - e,
        projections,
        blocks,
    })
}

impl<'a> PeirceContext<'a> {
    pub fn algebra(&self) -> &'a StructureAlgebra {
        self.algebra
    }

    pub fn e1(&self) -> &Element {
        &self.e1
    }

    pub fn e2(&self) -> &Element {
        &self.e2
    }

    /// `e_i` for `i ∈ {1, 2}`.
    pub fn idempotent(&self, i: usize) -> &Element {
        match i {
            1 => &self.e1,
            2 => &self.e2,
            _ => panic!("idempotent index {i}"),
        }
    }

    pub fn projection(&self, b: Block) -> &RatMatrix {
        &self.projections[b.index()]
    }

    /// Canonical basis of the block `A_ij`.
    pub fn block_basis(&self, b: Block) -> &SubspaceBasis {
        &self.blocks[b.index()]
    }

    pub fn block_elements(&self, b: Block) -> Vec<Element> {
        self.block_basis(b).vectors().iter().cloned().map(Element::from_coords).collect()
    }

    pub fn project(&self, b: Block, a: &Element) -> Element {
        Element::from_coords(self.projection(b).mul_vec(a.coords()))
    }

    /// `(a11, a12, a21, a22)`.
    pub fn peirce_project(&self, a: &Element) -> [Element; 4] {
        Block::ALL.map(|b| self.project(b, a))
    }

    pub fn in_block(&self, b: Block, a: &Element) -> bool {
        &self.project(b, a) == a
    }

    /// Random element of a block.
    pub fn random_in_block(&self, b: Block, rng: &mut ChaCha8Rng) -> Element {
        let raw = Element::random(self.algebra.dim(), rng);
        self.project(b, &raw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PeirceRule {
    /// `A_ij A_jl ⊆ A_il`
    Closure,
    /// `A_ij A_ij ⊆ A_ji`
    SameBlock,
    /// `A_ij A_kl = 0` when `j ≠ k` and `(i,j) ≠ (k,l)`
    Annihilation,
    /// `x_ij² = 0` for `i ≠ j`
    NilSquare,
}

impl PeirceRule {
    pub fn label(self) -> &'static str {
        match self {
            PeirceRule::Closure => "i",
            PeirceRule::SameBlock => "ii",
            PeirceRule::Annihilation => "iii",
            PeirceRule::NilSquare => "iv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleFailure {
    pub rule: PeirceRule,
    pub left: Block,
    pub right: Block,
    pub u: Element,
    pub v: Element,
    pub product: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductWitness {
    pub block: Block,
    pub u: Element,
    pub v: Element,
    pub product: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeirceReport {
    pub failures: Vec<RuleFailure>,
    /// For each off-diagonal block, a basis pair with a nonzero product, if any.
    pub nonzero_off_diagonal_products: Vec<ProductWitness>,
    pub random_checks: usize,
}

impl PeirceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

const RANDOM_SQUARES: usize = 24;

/// Verifies the four Peirce multiplication rules.
///
/// Rules (i)-(iii) are bilinear and are checked on block bases. Rule (iv) is
/// checked exactly through its polarization `uv + vu = 0` on block bases, then
/// again on seeded random block elements.
pub fn check_peirce_relations(ctx: &PeirceContext<'_>) -> PeirceReport {
    let alg = ctx.algebra;
    let mut failures = Vec::new();
    let mut nonzero = Vec::new();
    let elems: Vec<Vec<Element>> = Block::ALL.iter().map(|&b| ctx.block_elements(b)).collect();

    for (li, &left) in Block::ALL.iter().enumerate() {
        for (ri, &right) in Block::ALL.iter().enumerate() {
            for u in &elems[li] {
                for v in &elems[ri] {
                    let p = alg.mul(u, v);
                    let fail = |rule| RuleFailure {
                        rule,
                        left,
                        right,
                        u: u.clone(),
                        v: v.clone(),
                        product: p.clone(),
                    };
                    if left.1 == right.0 {
                        if !ctx.in_block(Block(left.0, right.1), &p) {
                            failures.push(fail(PeirceRule::Closure));
                        }
                    } else if left == right {
                        if !ctx.in_block(left.transpose(), &p) {
                            failures.push(fail(PeirceRule::SameBlock));
                        }
                    } else if !p.is_zero() {
                        failures.push(fail(PeirceRule::Annihilation));
                    }
                }
            }
        }
    }

    for &b in Block::ALL.iter().filter(|b| !b.is_diagonal()) {
        let basis = &elems[b.index()];
        let mut witness = None;
        for (s, u) in basis.iter().enumerate() {
            for v in &basis[s..] {
                let uv = alg.mul(u, v);
                if witness.is_none() && !uv.is_zero() {
                    witness = Some(ProductWitness { block: b, u: u.clone(), v: v.clone(), product: uv.clone() });
                }
                let sym = &uv + &alg.mul(v, u);
                if !sym.is_zero() {
                    failures.push(RuleFailure {
                        rule: PeirceRule::NilSquare,
                        left: b,
                        right: b,
                        u: u.clone(),
                        v: v.clone(),
                        product: sym,
                    });
                }
            }
        }
        nonzero.extend(witness);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut random_checks = 0;
    for &b in Block::ALL.iter().filter(|b| !b.is_diagonal()) {
        for _ in 0..RANDOM_SQUARES {
            let x = ctx.random_in_block(b, &mut rng);
            let sq = alg.mul(&x, &x);
            random_checks += 1;
            if !sq.is_zero() {
                failures.push(RuleFailure {
                    rule: PeirceRule::NilSquare,
                    left: b,
                    right: b,
                    u: x.clone(),
                    v: x,
                    product: sq,
                });
            }
        }
    }

    PeirceReport { failures, nonzero_off_diagonal_products: nonzero, random_checks }
}

/// Outcome of the faithfulness conditions `xA·e = 0 ⇒ x = 0` (spade) and
/// `xA·(1 - e) = 0 ⇒ x = 0` (club).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Faithfulness {
    pub spade: bool,
    pub club: bool,
    /// Nonzero `x` with `xA·e = 0`, when spade fails.
    pub spade_witness: Option<Element>,
    pub club_witness: Option<Element>,
}

impl Faithfulness {
    pub fn holds(&self) -> bool {
        self.spade && self.club
    }
}

/// Kernel of `x ↦ ((x b_j) f)_j` stacked over all basis elements `b_j`.
pub fn annihilator_kernel(alg: &StructureAlgebra, f: &Element) -> SubspaceBasis {
    let dim = alg.dim();
    let mut m = RatMatrix::zeros(dim * dim, dim);
    for s in 0..dim {
        let bs = alg.basis(s);
        for j in 0..dim {
            let img = alg.mul(&alg.mul(&bs, &alg.basis(j)), f);
            for (c, x) in img.support() {
                m[(j * dim + c, s)] = x.clone();
            }
        }
    }
    kernel_basis(&m)
}

pub fn check_faithfulness(ctx: &PeirceContext<'_>) -> Faithfulness {
    let spade = annihilator_kernel(ctx.algebra, &ctx.e1);
    let club = annihilator_kernel(ctx.algebra, &ctx.e2);
    let first = |k: &SubspaceBasis| k.vectors().first().cloned().map(Element::from_coords);
    Faithfulness {
        spade: spade.is_zero(),
        club: club.is_zero(),
        spade_witness: first(&spade),
        club_witness: first(&club),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn named(alg: &StructureAlgebra, n: &str) -> Element {
        alg.basis(alg.basis_index(n).unwrap())
    }

    #[test]
    fn idempotent_validation_errors() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        assert!(validate_symmetric_idempotent(&m2, m2.idempotent("e").unwrap()).is_ok());
        assert_eq!(
            validate_symmetric_idempotent(&m2, m2.unit()).unwrap_err(),
            PeirceError::TrivialIdempotent
        );
        assert_eq!(
            validate_symmetric_idempotent(&m2, &m2.zero()).unwrap_err(),
            PeirceError::TrivialIdempotent
        );
        let e12 = named(&m2, "E12");
        assert!(matches!(
            validate_symmetric_idempotent(&m2, &e12),
            Err(PeirceError::NotIdempotent { .. })
        ));
        // E11 + E12 is idempotent but not hermitian.
        let p = &named(&m2, "E11") + &e12;
        assert_eq!(m2.mul(&p, &p), p);
        assert!(matches!(
            validate_symmetric_idempotent(&m2, &p),
            Err(PeirceError::NotSymmetric { .. })
        ));
        assert!(matches!(
            validate_symmetric_idempotent(&m2, &Element::zero(3)),
            Err(PeirceError::Algebra(_))
        ));
    }

    #[test]
    fn octonion_conjugation_rejects_diagonal_idempotent() {
        // Under the standard Zorn conjugation [[a,v],[w,b]] ↦ [[b,-v],[-w,a]]
        // the idempotent E11 goes to its complement.
        let z = catalog::zorn_algebra();
        let mut conj = RatMatrix::zeros(8, 8);
        conj[(7, 0)] = Rational::one();
        conj[(0, 7)] = Rational::one();
        for k in 1..7 {
            conj[(k, k)] = -Rational::one();
        }
        let table = (0..8).map(|i| (0..8).map(|j| z.table_entry(i, j)).collect()).collect();
        let zc = StructureAlgebra::new(
            "Zorn, conjugation",
            z.basis_names().to_vec(),
            table,
            z.unit().coords().to_vec(),
            conj,
        )
        .unwrap();
        assert!(zc.validate().is_valid());
        let e = named(&zc, "E11");
        assert!(matches!(
            validate_symmetric_idempotent(&zc, &e),
            Err(PeirceError::NotSymmetric { star }) if star == named(&zc, "E22")
        ));
    }

    #[test]
    fn projections_partition_identity() {
        for alg in [catalog::matrix_star_algebra(2).unwrap(), catalog::zorn_algebra(), catalog::m2_sum()] {
            let ctx = validate_symmetric_idempotent(&alg, alg.idempotent("e").unwrap()).unwrap();
            let dim = alg.dim();
            let mut total = RatMatrix::zeros(dim, dim);
            for b in Block::ALL {
                total = total.add(ctx.projection(b));
                for c in Block::ALL {
                    let prod = ctx.projection(b).matmul(ctx.projection(c));
                    if b == c {
                        assert_eq!(&prod, ctx.projection(b));
                    } else {
                        assert!(prod.is_zero(), "{b} {c}");
                    }
                }
            }
            assert_eq!(total, RatMatrix::identity(dim));
            let sigma = alg.involution_matrix();
            assert_eq!(
                sigma.matmul(ctx.projection(Block(1, 2))),
                ctx.projection(Block(2, 1)).matmul(sigma)
            );
            assert_eq!(sigma.matmul(ctx.projection(Block(1, 1))), ctx.projection(Block(1, 1)).matmul(sigma));
        }
    }

    #[test]
    fn project_examples() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let ctx = validate_symmetric_idempotent(&m2, m2.idempotent("e").unwrap()).unwrap();
        let (e12, e21) = (named(&m2, "E12"), named(&m2, "E21"));
        let parts = ctx.peirce_project(&(&e12 + &e21));
        assert_eq!(parts, [m2.zero(), e12.clone(), e21.clone(), m2.zero()]);
        let parts = ctx.peirce_project(m2.unit());
        assert_eq!(parts, [ctx.e1().clone(), m2.zero(), m2.zero(), ctx.e2().clone()]);

        let z = catalog::zorn_algebra();
        let ctx = validate_symmetric_idempotent(&z, z.idempotent("e").unwrap()).unwrap();
        let a = Element::from_ints(&[0, 1, 2, 3, 4, 5, 6, 0]);
        let [a11, a12, a21, a22] = ctx.peirce_project(&a);
        assert!(a11.is_zero() && a22.is_zero());
        assert_eq!(a12, Element::from_ints(&[0, 1, 2, 3, 0, 0, 0, 0]));
        assert_eq!(a21, Element::from_ints(&[0, 0, 0, 0, 4, 5, 6, 0]));
    }

    #[test]
    fn rules_hold_and_zorn_exhibits_cross_products() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let ctx = validate_symmetric_idempotent(&m2, m2.idempotent("e").unwrap()).unwrap();
        let r = check_peirce_relations(&ctx);
        assert!(r.holds(), "{:?}", r.failures.first());
        assert!(r.nonzero_off_diagonal_products.is_empty());
        let e12 = named(&m2, "E12");
        assert!(m2.mul(&e12, &e12).is_zero());

        let z = catalog::zorn_algebra();
        let ctx = validate_symmetric_idempotent(&z, z.idempotent("e").unwrap()).unwrap();
        let r = check_peirce_relations(&ctx);
        assert!(r.holds(), "{:?}", r.failures.first());
        let w = &r.nonzero_off_diagonal_products[0];
        assert_eq!(w.block, Block(1, 2));
        assert!(ctx.in_block(Block(2, 1), &w.product));
        assert!(!w.product.is_zero());
    }

    #[test]
    fn central_idempotent_is_not_faithful() {
        // Q x Q with e = (1, 0): the rules hold trivially, both conditions fail.
        let names = vec!["p".to_string(), "q".to_string()];
        let one = Rational::one();
        let z = Rational::zero();
        let table = vec![
            vec![vec![one.clone(), z.clone()], vec![z.clone(), z.clone()]],
            vec![vec![z.clone(), z.clone()], vec![z.clone(), one.clone()]],
        ];
        let alg = StructureAlgebra::new("QxQ", names, table, vec![one.clone(), one.clone()], RatMatrix::identity(2)).unwrap();
        let ctx = validate_symmetric_idempotent(&alg, &alg.basis(0)).unwrap();
        assert!(check_peirce_relations(&ctx).holds());
        assert!(ctx.block_basis(Block(1, 2)).is_zero());
        // x = (0, 1) satisfies x A e = 0.
        let f = check_faithfulness(&ctx);
        assert!(!f.spade && !f.club);
        assert_eq!(f.spade_witness, Some(alg.basis(1)));
    }

    #[test]
    fn faithfulness_examples() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let ctx = validate_symmetric_idempotent(&m2, m2.idempotent("e").unwrap()).unwrap();
        assert!(check_faithfulness(&ctx).holds());

        let z = catalog::zorn_algebra();
        let ctx = validate_symmetric_idempotent(&z, z.idempotent("e").unwrap()).unwrap();
        assert!(check_faithfulness(&ctx).holds());

        let s = catalog::m2_sum();
        let ctx = validate_symmetric_idempotent(&s, s.idempotent("e").unwrap()).unwrap();
        assert!(check_faithfulness(&ctx).holds());
        let ctx = validate_symmetric_idempotent(&s, s.idempotent("e_one_sided").unwrap()).unwrap();
        let f = check_faithfulness(&ctx);
        assert!(!f.spade);
        assert!(f.club);
        let x = f.spade_witness.unwrap();
        assert!(!x.is_zero());
        // The witness lives in the second summand.
        assert!(x.coords()[..8].iter().all(Rational::is_zero));
        for j in 0..s.dim() {
            assert!(s.mul(&s.mul(&x, &s.basis(j)), ctx.e1()).is_zero());
        }
    }
}
