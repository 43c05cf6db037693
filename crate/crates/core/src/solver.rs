//! Linear constraint systems whose kernels are derivation-type spaces, and
//! the theorem check comparing *-derivations with restricted *-Jordan
//! n-derivations.
//!
//! Unknowns are the entries of an operator matrix in row-major order: entry
//! `(r, s)` (coordinate `r` of `D(b_s)`) is unknown number `r * dim + s`.
//! Every constraint is one output coordinate of a basis-tuple identity, so the
//! rows are generated in lexicographic tuple order.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Arity, Element, StructureAlgebra, ValidationReport};
use crate::claims::{self, ClaimResult};
use crate::linalg::{subspace_equal, RowReducer, SubspaceBasis};
use crate::operators::{
    advance, inner_derivation, is_derivation, is_star_map, jordan_n_identity_holds, JordanMode, LinearOperator,
    OpWitness,
};
use crate::peirce::{check_faithfulness, validate_symmetric_idempotent, Faithfulness};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("space {0} needs an arity n >= 2")]
    ArityMissing(SpaceKind),
    #[error("the inner derivation span is not defined by linear equations")]
    NotAKernel,
    #[error("solved basis operator {index} of {kind} fails its defining law")]
    Reverification { kind: SpaceKind, index: usize, witness: Option<OpWitness> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpaceKind {
    Derivation,
    StarDerivation,
    JordanRestricted,
    JordanFull,
    /// Span of the inner derivations `Ξ_{b_i, b_j}`.
    InnerDerivations,
}

impl SpaceKind {
    pub fn label(self) -> &'static str {
        match self {
            SpaceKind::Derivation => "derivation",
            SpaceKind::StarDerivation => "star_derivation",
            SpaceKind::JordanRestricted => "jordan_n_restricted",
            SpaceKind::JordanFull => "jordan_n_full",
            SpaceKind::InnerDerivations => "inner_derivations",
        }
    }

    pub fn needs_arity(self) -> bool {
        matches!(self, SpaceKind::JordanRestricted | SpaceKind::JordanFull)
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

type SparseRow = Vec<(usize, Rational)>;

/// Scalar equations in the `dim²` operator entries.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    unknown_dim: usize,
    rows: Vec<SparseRow>,
}

impl ConstraintSystem {
    pub fn unknown_dim(&self) -> usize {
        self.unknown_dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dense_row(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.unknown_dim];
        for (k, x) in &self.rows[i] {
            v[*k] = x.clone();
        }
        v
    }

    /// Canonical basis of the solution space.
    pub fn solve(&self) -> SubspaceBasis {
        let mut red = RowReducer::new(self.unknown_dim);
        for i in 0..self.rows.len() {
            red.push(self.dense_row(i));
        }
        red.null_space()
    }

    /// Whether the vectorized operator satisfies every equation.
    pub fn satisfied_by(&self, op: &LinearOperator) -> bool {
        let v = op.to_vector();
        self.rows.iter().all(|row| row.iter().map(|(k, x)| x * &v[*k]).sum::<Rational>().is_zero())
    }

    fn push_block(&mut self, block: EquationBlock) {
        for row in block.rows {
            let sparse: SparseRow = row.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            if !sparse.is_empty() {
                self.rows.push(sparse);
            }
        }
    }

    /// Assembles the defining equations of `kind`. Star derivations combine
    /// the Leibniz and the involution equations.
    pub fn assemble(alg: &StructureAlgebra, kind: SpaceKind, n: Option<Arity>) -> Result<Self, SolverError> {
        let dim = alg.dim();
        let mut sys = ConstraintSystem { unknown_dim: dim * dim, rows: Vec::new() };
        let arity = || n.ok_or(SolverError::ArityMissing(kind));
        match kind {
            SpaceKind::Derivation => sys.leibniz(alg),
            SpaceKind::StarDerivation => {
                sys.leibniz(alg);
                sys.star(alg);
            }
            SpaceKind::JordanRestricted => sys.jordan_restricted(alg, arity()?),
            SpaceKind::JordanFull => sys.jordan_full(alg, arity()?),
            SpaceKind::InnerDerivations => return Err(SolverError::NotAKernel),
        }
        Ok(sys)
    }

    fn leibniz(&mut self, alg: &StructureAlgebra) {
        let basis = alg.basis_elements();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let mut eq = EquationBlock::new(alg.dim());
                eq.direct(&alg.mul(&basis[i], &basis[j]), true);
                eq.through(alg, &basis[i], |w| alg.mul(w, &basis[j]), false);
                eq.through(alg, &basis[j], |w| alg.mul(&basis[i], w), false);
                self.push_block(eq);
            }
        }
    }

    fn star(&mut self, alg: &StructureAlgebra) {
        let basis = alg.basis_elements();
        let mut eq = EquationBlock::new(alg.dim());
        for b in &basis {
            eq.reset();
            eq.direct(&alg.star(b), true);
            eq.through(alg, b, |w| alg.star(w), false);
            self.push_block(eq.clone());
        }
    }

    fn jordan_restricted(&mut self, alg: &StructureAlgebra, n: Arity) {
        let nn = n.get();
        let one = alg.unit();
        let basis = alg.basis_elements();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let (u, v) = (&basis[i], &basis[j]);
                let mut eq = EquationBlock::new(alg.dim());
                eq.direct(&alg.xi(one, u, v, n), true);
                for k in 1..=nn - 2 {
                    eq.through(alg, one, |w| alg.insertion_unchecked(k, w, u, v, nn), false);
                }
                eq.through(alg, u, |w| alg.insertion_unchecked(nn - 1, w, u, v, nn), false);
                eq.through(alg, v, |w| alg.insertion_unchecked(nn, w, u, v, nn), false);
                self.push_block(eq);
            }
        }
    }

    fn jordan_full(&mut self, alg: &StructureAlgebra, n: Arity) {
        let nn = n.get();
        let dim = alg.dim();
        let basis = alg.basis_elements();
        let mut tuple = vec![0usize; nn];
        loop {
            let args: Vec<Element> = tuple.iter().map(|&t| basis[t].clone()).collect();
            let mut eq = EquationBlock::new(dim);
            eq.direct(&alg.nested_product(&args).expect("n >= 2"), true);
            for k in 0..nn {
                eq.through(
                    alg,
                    &args[k],
                    |w| {
                        let mut replaced = args.clone();
                        replaced[k] = w.clone();
                        alg.nested_product(&replaced).expect("n >= 2")
                    },
                    false,
                );
            }
            self.push_block(eq);
            if !advance(&mut tuple, dim) {
                break;
            }
        }
    }
}

/// The `dim` scalar equations of one vector identity `Σ ± term = 0`, each
/// term linear in the unknown operator `D`.
#[derive(Clone)]
struct EquationBlock {
    dim: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl EquationBlock {
    fn new(dim: usize) -> Self {
        EquationBlock { dim, rows: vec![BTreeMap::new(); dim] }
    }

    fn reset(&mut self) {
        for r in &mut self.rows {
            r.clear();
        }
    }

    fn add(&mut self, c: usize, unknown: usize, value: Rational, positive: bool) {
        let slot = self.rows[c].entry(unknown).or_insert_with(Rational::zero);
        if positive {
            *slot += &value;
        } else {
            *slot -= &value;
        }
    }

    /// `± D(x)`: coordinate `c` reads `Σ_s D[c][s] x_s`.
    fn direct(&mut self, x: &Element, positive: bool) {
        for (s, xs) in x.support() {
            for c in 0..self.dim {
                self.add(c, c * self.dim + s, xs.clone(), positive);
            }
        }
    }

    /// `± F(D(x))` for a linear `F`: coordinate `c` reads
    /// `Σ_{r,s} D[r][s] x_s F(b_r)_c`.
    fn through(&mut self, alg: &StructureAlgebra, x: &Element, f: impl Fn(&Element) -> Element, positive: bool) {
        let support: Vec<(usize, Rational)> = x.support().map(|(s, v)| (s, v.clone())).collect();
        if support.is_empty() {
            return;
        }
        for r in 0..self.dim {
            let fr = f(&alg.basis(r));
            for (c, val) in fr.support() {
                for (s, xs) in &support {
                    self.add(c, r * self.dim + s, xs * val, positive);
                }
            }
        }
    }
}

/// A solved space of operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    pub kind: SpaceKind,
    pub n: Option<Arity>,
    pub algebra_dim: usize,
    pub basis: SubspaceBasis,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn operators(&self) -> Vec<LinearOperator> {
        self.basis
            .vectors()
            .iter()
            .map(|v| LinearOperator::from_vector(self.algebra_dim, v.clone()))
            .collect()
    }

    pub fn contains(&self, op: &LinearOperator) -> bool {
        self.basis.contains_vector(&op.to_vector()).expect("same ambient dimension")
    }
}

/// The law that defines membership in `kind`.
pub fn defining_law(alg: &StructureAlgebra, d: &LinearOperator, kind: SpaceKind, n: Option<Arity>) -> Option<OpWitness> {
    let v = match kind {
        SpaceKind::Derivation | SpaceKind::InnerDerivations => is_derivation(alg, d),
        SpaceKind::StarDerivation => {
            let v = is_derivation(alg, d);
            if v.holds() {
                is_star_map(alg, d)
            } else {
                v
            }
        }
        SpaceKind::JordanRestricted => jordan_n_identity_holds(alg, d, n.expect("arity"), JordanMode::Restricted),
        SpaceKind::JordanFull => jordan_n_identity_holds(alg, d, n.expect("arity"), JordanMode::Full),
    };
    v.witness
}

fn reverify(alg: &StructureAlgebra, space: &DerivationSpace) -> Result<(), SolverError> {
    for (index, d) in space.operators().iter().enumerate() {
        if let Some(w) = defining_law(alg, d, space.kind, space.n) {
            return Err(SolverError::Reverification { kind: space.kind, index, witness: Some(w) });
        }
    }
    Ok(())
}

/// Solves for the space of `kind` and re-checks each basis operator.
pub fn solve_space(alg: &StructureAlgebra, kind: SpaceKind, n: Option<Arity>) -> Result<DerivationSpace, SolverError> {
    if kind == SpaceKind::InnerDerivations {
        return inner_derivation_span(alg);
    }
    if kind.needs_arity() && n.is_none() {
        return Err(SolverError::ArityMissing(kind));
    }
    let sys = ConstraintSystem::assemble(alg, kind, n)?;
    let space = DerivationSpace {
        kind,
        n: if kind.needs_arity() { n } else { None },
        algebra_dim: alg.dim(),
        basis: sys.solve(),
    };
    reverify(alg, &space)?;
    Ok(space)
}

/// Span of `Ξ_{b_i, b_j}` over all basis pairs.
pub fn inner_derivation_span(alg: &StructureAlgebra) -> Result<DerivationSpace, SolverError> {
    let dim = alg.dim();
    let basis = alg.basis_elements();
    let mut red = RowReducer::new(dim * dim);
    for i in 0..dim {
        for j in i + 1..dim {
            red.push(inner_derivation(alg, &basis[i], &basis[j]).to_vector());
        }
    }
    let space = DerivationSpace {
        kind: SpaceKind::InnerDerivations,
        n: None,
        algebra_dim: dim,
        basis: red.row_space(),
    };
    reverify(alg, &space)?;
    Ok(space)
}

/// Hypothesis status, both solved spaces and claim results for one
/// `(algebra, idempotent, n)` instance.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub n: Arity,
    pub validation: ValidationReport,
    /// `Ok` when `e` is a nontrivial symmetric idempotent; otherwise the reason.
    pub idempotent: Result<(), String>,
    pub faithfulness: Option<Faithfulness>,
    pub star_derivation_dim: usize,
    pub jordan_restricted_dim: usize,
    pub star_in_jordan: bool,
    pub equal: bool,
    /// Pipeline results aggregated over every basis operator of the Jordan space.
    pub claims: Vec<ClaimResult>,
    pub star_space: DerivationSpace,
    pub jordan_space: DerivationSpace,
}

impl TheoremReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.validation.is_valid()
            && self.idempotent.is_ok()
            && self.faithfulness.as_ref().is_some_and(Faithfulness::holds)
    }

    pub fn claims_pass(&self) -> bool {
        self.claims.iter().all(|c| !c.is_failure())
    }

    pub fn passed(&self) -> bool {
        self.hypotheses_hold() && self.equal && self.claims_pass()
    }
}

/// Checks the hypotheses, solves both spaces and, when they agree and the
/// idempotent is valid, runs the claim pipeline on every Jordan basis operator.
pub fn verify_theorem(alg: &StructureAlgebra, e: &Element, n: Arity) -> Result<TheoremReport, SolverError> {
    let validation = alg.validate();
    let ctx = validate_symmetric_idempotent(alg, e);
    let faithfulness = ctx.as_ref().ok().map(check_faithfulness);

    let star_space = solve_space(alg, SpaceKind::StarDerivation, None)?;
    let jordan_space = solve_space(alg, SpaceKind::JordanRestricted, Some(n))?;
    let star_in_jordan = star_space.basis.is_subspace_of(&jordan_space.basis).expect("same ambient");
    let equal = subspace_equal(&star_space.basis, &jordan_space.basis).expect("same ambient");

    let claims = match &ctx {
        Ok(ctx) if equal => {
            let runs: Vec<Vec<ClaimResult>> = jordan_space
                .operators()
                .iter()
                .map(|d| claims::run_claim_pipeline(ctx, d, n).unwrap_or_else(|err| vec![err.into_result()]))
                .collect();
            claims::aggregate(&runs)
        }
        _ => Vec::new(),
    };

    Ok(TheoremReport {
        n,
        validation,
        idempotent: ctx.as_ref().map(|_| ()).map_err(|err| err.to_string()),
        faithfulness,
        star_derivation_dim: star_space.dim(),
        jordan_restricted_dim: jordan_space.dim(),
        star_in_jordan,
        equal,
        claims,
        star_space,
        jordan_space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn ar(n: usize) -> Arity {
        Arity::new(n).unwrap()
    }

    #[test]
    fn arity_is_required_for_jordan_kinds() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        assert_eq!(
            solve_space(&m2, SpaceKind::JordanRestricted, None).unwrap_err(),
            SolverError::ArityMissing(SpaceKind::JordanRestricted)
        );
        assert!(solve_space(&m2, SpaceKind::Derivation, None).is_ok());
    }

    #[test]
    fn commutative_algebra_has_no_inner_derivations() {
        let names = vec!["p".to_string(), "q".to_string()];
        let (one, z) = (Rational::one(), Rational::zero());
        let table = vec![
            vec![vec![one.clone(), z.clone()], vec![z.clone(), z.clone()]],
            vec![vec![z.clone(), z.clone()], vec![z.clone(), one.clone()]],
        ];
        let alg = StructureAlgebra::new(
            "QxQ",
            names,
            table,
            vec![one.clone(), one],
            crate::linalg::RatMatrix::identity(2),
        )
        .unwrap();
        assert_eq!(inner_derivation_span(&alg).unwrap().dim(), 0);
        assert_eq!(solve_space(&alg, SpaceKind::Derivation, None).unwrap().dim(), 0);
    }

    #[test]
    fn m2_spaces() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let der = solve_space(&m2, SpaceKind::Derivation, None).unwrap();
        assert_eq!(der.dim(), 6);
        let inner = inner_derivation_span(&m2).unwrap();
        assert!(subspace_equal(&der.basis, &inner.basis).unwrap());
        let star = solve_space(&m2, SpaceKind::StarDerivation, None).unwrap();
        assert_eq!(star.dim(), 3);
        for n in 2..=4 {
            let j = solve_space(&m2, SpaceKind::JordanRestricted, Some(ar(n))).unwrap();
            assert!(subspace_equal(&star.basis, &j.basis).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn system_rows_are_satisfied_by_solutions() {
        let z = catalog::zorn_algebra();
        let sys = ConstraintSystem::assemble(&z, SpaceKind::Derivation, None).unwrap();
        assert_eq!(sys.unknown_dim(), 64);
        let space = solve_space(&z, SpaceKind::Derivation, None).unwrap();
        for d in space.operators() {
            assert!(sys.satisfied_by(&d));
        }
        assert!(!sys.satisfied_by(&LinearOperator::identity(8)));
    }
    #[test]
    fn star_inside_full_inside_restricted() {
        for alg in [catalog::matrix_star_algebra(2).unwrap(), catalog::zorn_algebra()] {
            let star = solve_space(&alg, SpaceKind::StarDerivation, None).unwrap();
            for n in [2, 3] {
                let full = solve_space(&alg, SpaceKind::JordanFull, Some(ar(n))).unwrap();
                let restricted = solve_space(&alg, SpaceKind::JordanRestricted, Some(ar(n))).unwrap();
                assert!(star.basis.is_subspace_of(&full.basis).unwrap());
                assert!(full.basis.is_subspace_of(&restricted.basis).unwrap());
            }
        }
    }

    #[test]
    fn one_sided_idempotent_still_solves_both_spaces() {
        let bad = catalog::m2_sum_one_sided();
        let r = verify_theorem(&bad, bad.idempotent("e").unwrap(), ar(2)).unwrap();
        assert!(!r.hypotheses_hold());
        assert!(!r.faithfulness.as_ref().unwrap().spade);
        assert_eq!(r.star_derivation_dim, 6);
        assert_eq!(r.jordan_restricted_dim, 6);
        assert!(!r.passed());
    }

    #[test]
    fn trivial_idempotent_is_reported() {
        let m2 = catalog::matrix_star_algebra(2).unwrap();
        let r = verify_theorem(&m2, m2.unit(), ar(2)).unwrap();
        assert!(r.idempotent.is_err());
        assert!(r.faithfulness.is_none());
        assert!(r.claims.is_empty());
        assert!(r.equal);
    }
}
