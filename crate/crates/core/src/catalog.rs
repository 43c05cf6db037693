//! Reference algebras: realified complex matrix *-algebras, the Zorn
//! vector-matrix algebra and direct sums.

use std::ops::{Add, Mul};

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, StructureAlgebra};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("matrix size must be at least 2, got {0}")]
    SizeTooSmall(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("constructed algebra {name} fails {axiom} on basis tuple {tuple:?}")]
    Invalid { name: String, axiom: &'static str, tuple: Vec<usize> },
}

/// Canonical names understood by [`by_name`].
pub const CATALOG_NAMES: &[&str] = &["m2", "m3", "zorn", "m2sum", "m2sum-bad"];

/// An element `re + i·im` of ℚ(i).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        Gaussian::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -&self.im)
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

/// A *-algebra over ℚ(i) with a conjugate-linear involution.
#[derive(Debug, Clone)]
pub struct ComplexStructureSpec {
    pub name: String,
    pub basis_names: Vec<String>,
    /// `table[j][k]` is the coordinate vector of `b_j b_k`.
    pub table: Vec<Vec<Vec<Gaussian>>>,
    pub unit: Vec<Gaussian>,
    /// `involution[j]` is the coordinate vector of `b_j*`; extended
    /// conjugate-linearly.
    pub involution: Vec<Vec<Gaussian>>,
}

/// The ℚ-algebra with basis `b_0..b_{m-1}, i·b_0..i·b_{m-1}`.
pub fn realify(spec: &ComplexStructureSpec) -> Result<StructureAlgebra, CatalogError> {
    let m = spec.basis_names.len();
    let flatten = |v: &[Gaussian]| -> Vec<Rational> {
        v.iter().map(|g| g.re.clone()).chain(v.iter().map(|g| g.im.clone())).collect()
    };
    // i^p as a Gaussian rational.
    let ipow = |p: usize| match p % 4 {
        0 => Gaussian::one(),
        1 => Gaussian::i(),
        2 => Gaussian::real(-Rational::one()),
        _ => Gaussian::new(Rational::zero(), -Rational::one()),
    };

    let mut table = vec![vec![Vec::new(); 2 * m]; 2 * m];
    for p in 0..2 {
        for q in 0..2 {
            let scalar = ipow(p + q);
            for j in 0..m {
                for k in 0..m {
                    let scaled: Vec<Gaussian> = spec.table[j][k].iter().map(|c| &scalar * c).collect();
                    table[j + m * p][k + m * q] = flatten(&scaled);
                }
            }
        }
    }

    let mut columns = vec![Vec::new(); 2 * m];
    for j in 0..m {
        let image = &spec.involution[j];
        columns[j] = flatten(image);
        // (i b)* = -i b*
        let minus_i = ipow(3);
        let rotated: Vec<Gaussian> = image.iter().map(|c| &minus_i * c).collect();
        columns[j + m] = flatten(&rotated);
    }

    let names = spec
        .basis_names
        .iter()
        .cloned()
        .chain(spec.basis_names.iter().map(|n| format!("i{n}")))
        .collect();
    let alg = StructureAlgebra::new(
        spec.name.clone(),
        names,
        table,
        flatten(&spec.unit),
        RatMatrix::from_columns(2 * m, &columns),
    )?;
    ensure_valid(alg)
}

fn ensure_valid(alg: StructureAlgebra) -> Result<StructureAlgebra, CatalogError> {
    let report = alg.validate();
    if let Some(f) = report.first_failure() {
        return Err(CatalogError::Invalid {
            name: alg.name().to_string(),
            axiom: f.axiom.label(),
            tuple: f.tuple.clone(),
        });
    }
    Ok(alg)
}

/// `M_k(ℚ(i))` with the conjugate-transpose involution, before realification.
pub fn complex_matrix_spec(k: usize) -> ComplexStructureSpec {
    let m = k * k;
    let idx = |r: usize, c: usize| r * k + c;
    let unitvec = |i: usize| {
        let mut v = vec![Gaussian::zero(); m];
        v[i] = Gaussian::one();
        v
    };
    let mut table = vec![vec![vec![Gaussian::zero(); m]; m]; m];
    for r in 0..k {
        for c in 0..k {
            for t in 0..k {
                // E_rc E_ct = E_rt
                table[idx(r, c)][idx(c, t)] = unitvec(idx(r, t));
            }
        }
    }
    let mut unit = vec![Gaussian::zero(); m];
    for r in 0..k {
        unit[idx(r, r)] = Gaussian::one();
    }
    let involution = (0..m).map(|j| unitvec(idx(j % k, j / k))).collect();
    ComplexStructureSpec {
        name: format!("M{k}(Q(i))"),
        basis_names: (0..m).map(|j| format!("E{}{}", j / k + 1, j % k + 1)).collect(),
        table,
        unit,
        involution,
    }
}

/// Realified `M_k(ℚ(i))` with conjugate transpose; the symmetric idempotent
/// `E11` is exported as `"e"`.
pub fn matrix_star_algebra(k: usize) -> Result<StructureAlgebra, CatalogError> {
    if k < 2 {
        return Err(CatalogError::SizeTooSmall(k));
    }
    let alg = realify(&complex_matrix_spec(k))?;
    let e = alg.basis(alg.basis_index("E11").expect("E11 exists"));
    Ok(alg.with_idempotent("e", e)?)
}

const ZORN_NAMES: [&str; 8] = ["E11", "V1", "V2", "V3", "W1", "W2", "W3", "E22"];

// Coordinates: [a, v1, v2, v3, w1, w2, w3, b] for [[a, v], [w, b]].
fn zorn_product(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let (a, v, w, b) = (&x[0], &x[1..4], &x[4..7], &x[7]);
    let (a2, v2, w2, b2) = (&y[0], &y[1..4], &y[4..7], &y[7]);
    let dot = |p: &[Rational], q: &[Rational]| -> Rational { p.iter().zip(q).map(|(s, t)| s * t).sum() };
    let cross = |p: &[Rational], q: &[Rational]| -> [Rational; 3] {
        [
            &(&p[1] * &q[2]) - &(&p[2] * &q[1]),
            &(&p[2] * &q[0]) - &(&p[0] * &q[2]),
            &(&p[0] * &q[1]) - &(&p[1] * &q[0]),
        ]
    };
    let ww = cross(w, w2);
    let vv = cross(v, v2);
    let mut out = Vec::with_capacity(8);
    out.push(&(a * a2) + &dot(v, w2));
    for i in 0..3 {
        out.push(&(&(a * &v2[i]) + &(b2 * &v[i])) - &ww[i]);
    }
    for i in 0..3 {
        out.push(&(&(a2 * &w[i]) + &(b * &w2[i])) + &vv[i]);
    }
    out.push(&(b * b2) + &dot(w, v2));
    out
}

/// Split octonions as Zorn vector matrices, with the transpose involution
/// `[[a, v], [w, b]] ↦ [[a, w], [v, b]]` and symmetric idempotent
/// `e = [[1, 0], [0, 0]]` exported as `"e"`.
pub fn zorn_algebra() -> StructureAlgebra {
    let basis: Vec<Vec<Rational>> = (0..8).map(|i| Element::basis(8, i).into_coords()).collect();
    let table = basis
        .iter()
        .map(|x| basis.iter().map(|y| zorn_product(x, y)).collect())
        .collect();
    let mut unit = vec![Rational::zero(); 8];
    unit[0] = Rational::one();
    unit[7] = Rational::one();
    let swap = [0, 4, 5, 6, 1, 2, 3, 7];
    let columns: Vec<Vec<Rational>> = swap.iter().map(|&k| basis[k].clone()).collect();
    StructureAlgebra::new(
        "Zorn(Q)",
        ZORN_NAMES.iter().map(|s| s.to_string()).collect(),
        table,
        unit,
        RatMatrix::from_columns(8, &columns),
    )
    .and_then(|z| z.with_idempotent("e", Element::basis(8, 0)))
    .expect("Zorn table is well formed")
}

/// Componentwise product and involution on `A ⊕ B`. Basis names are prefixed
/// with `L.` and `R.`.
pub fn direct_sum(a: &StructureAlgebra, b: &StructureAlgebra) -> StructureAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let dim = da + db;
    let embed = |v: Vec<Rational>, offset: usize| {
        let mut out = vec![Rational::zero(); dim];
        for (i, x) in v.into_iter().enumerate() {
            out[i + offset] = x;
        }
        out
    };
    let mut table = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
    for i in 0..da {
        for j in 0..da {
            table[i][j] = embed(a.table_entry(i, j), 0);
        }
    }
    for i in 0..db {
        for j in 0..db {
            table[da + i][da + j] = embed(b.table_entry(i, j), da);
        }
    }
    let unit: Vec<Rational> = a.unit().coords().iter().chain(b.unit().coords()).cloned().collect();
    let mut columns = Vec::with_capacity(dim);
    for j in 0..da {
        columns.push(embed(a.involution_matrix().column(j), 0));
    }
    for j in 0..db {
        columns.push(embed(b.involution_matrix().column(j), da));
    }
    let names = a
        .basis_names()
        .iter()
        .map(|n| format!("L.{n}"))
        .chain(b.basis_names().iter().map(|n| format!("R.{n}")))
        .collect();
    StructureAlgebra::new(
        format!("{} + {}", a.name(), b.name()),
        names,
        table,
        unit,
        RatMatrix::from_columns(dim, &columns),
    )
    .expect("direct sum of well-formed algebras is well formed")
}

/// Pairs elements of the two summands.
pub fn pair(a: &Element, b: &Element) -> Element {
    Element::from_coords(a.coords().iter().chain(b.coords()).cloned().collect())
}

/// `M₂ ⊕ M₂` with `e = (E11, E11)` and the one-sided `e_one_sided = (E11, 0)`.
pub fn m2_sum() -> StructureAlgebra {
    let m2 = matrix_star_algebra(2).expect("k = 2");
    let e11 = m2.idempotent("e").expect("exported").clone();
    let sum = direct_sum(&m2, &m2);
    let both = pair(&e11, &e11);
    let one_sided = pair(&e11, &m2.zero());
    sum.with_idempotent("e", both)
        .and_then(|s| s.with_idempotent("e_one_sided", one_sided))
        .expect("dimensions match")
}

/// `M₂ ⊕ M₂` whose exported `"e"` is the one-sided idempotent `(E11, 0)`.
pub fn m2_sum_one_sided() -> StructureAlgebra {
    let m2 = matrix_star_algebra(2).expect("k = 2");
    let e11 = m2.idempotent("e").expect("exported").clone();
    let e = pair(&e11, &m2.zero());
    direct_sum(&m2, &m2)
        .with_name("M2(Q(i)) + M2(Q(i)), one-sided idempotent")
        .with_idempotent("e", e)
        .expect("dimensions match")
}

pub fn by_name(name: &str) -> Option<StructureAlgebra> {
    match name {
        "m2" => matrix_star_algebra(2).ok(),
        "m3" => matrix_star_algebra(3).ok(),
        "zorn" => Some(zorn_algebra()),
        "m2sum" => Some(m2_sum()),
        "m2sum-bad" => Some(m2_sum_one_sided()),
        _ => None,
    }
}
