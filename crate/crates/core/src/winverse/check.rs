use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{kernel_of, range_of, weighted_kernel};
use crate::error::{Error, Result};
use crate::numkernel::{check_finite, fro, Flag, Matrix, PsdOperator, Subspace, Tolerances};
use crate::projections::weighted_projection_membership;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseKind {
    /// `Gy` is an A₁-LSS of `Bx = y` for every `y`.
    AInverse,
    /// A₁-inverse whose solutions are restricted to `M`.
    Restricted,
    /// A₁-inverse returning the A₁-LSS of minimum A₂-seminorm.
    A1A2,
    WeakA1A2,
    /// Weighted generalized inverse.
    Wgi,
    /// `BG ∈ Π(A₁, R(B))` and `I − GB ∈ Π(A₂, N(B))`.
    WeakWgiSystem,
}

impl InverseKind {
    pub const ALL: [InverseKind; 6] = [
        InverseKind::AInverse,
        InverseKind::Restricted,
        InverseKind::A1A2,
        InverseKind::WeakA1A2,
        InverseKind::Wgi,
        InverseKind::WeakWgiSystem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InverseKind::AInverse => "a-inverse",
            InverseKind::Restricted => "restricted",
            InverseKind::A1A2 => "a1a2",
            InverseKind::WeakA1A2 => "weak-a1a2",
            InverseKind::Wgi => "wgi",
            InverseKind::WeakWgiSystem => "weak-wgi-system",
        }
    }

    pub fn needs_solution_weight(self) -> bool {
        !matches!(self, InverseKind::AInverse | InverseKind::Restricted)
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InverseKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        InverseKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| format!("unknown inverse kind `{s}`"))
    }
}

/// Verdicts of the two equivalent weak-w.g.i. forms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EquivalenceCheck {
    pub system: Flag,
    pub three_equation: Flag,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InverseReport {
    pub kind: InverseKind,
    pub passed: bool,
    pub equations: Vec<(&'static str, Flag)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalence: Option<EquivalenceCheck>,
}

impl InverseReport {
    pub fn equation(&self, name: &str) -> Option<Flag> {
        self.equations
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| *f)
    }
}

fn all(flags: &[(&'static str, Flag)]) -> Flag {
    flags
        .iter()
        .map(|(_, f)| *f)
        .reduce(Flag::and)
        .expect("non-empty")
}

struct Ctx<'a> {
    a1: &'a Matrix,
    a2: Option<&'a Matrix>,
    b: &'a Matrix,
    g: &'a Matrix,
    thr: f64,
}

impl Ctx<'_> {
    fn a2(&self) -> Result<&Matrix> {
        self.a2
            .ok_or(Error::MissingInput("solution-space weight A2"))
    }

    fn flag(&self, m: Matrix) -> Flag {
        Flag::new(fro(&m), self.thr)
    }

    /// `BᴴA₁BG = BᴴA₁`.
    fn normal(&self) -> Flag {
        let bha = self.b.adjoint() * self.a1;
        self.flag(&bha * self.b * self.g - bha)
    }

    fn bgb(&self) -> Flag {
        self.flag(self.b * self.g * self.b - self.b)
    }

    fn gbg(&self) -> Flag {
        self.flag(self.g * self.b * self.g - self.g)
    }

    /// `A₁BG = (BG)ᴴA₁`.
    fn left_selfadjoint(&self) -> Flag {
        let bg = self.b * self.g;
        self.flag(self.a1 * &bg - bg.adjoint() * self.a1)
    }

    fn right_selfadjoint(&self) -> Result<Flag> {
        let a2 = self.a2()?;
        let gb = self.g * self.b;
        Ok(self.flag(a2 * &gb - gb.adjoint() * a2))
    }

    fn three_equation(&self) -> Result<Vec<(&'static str, Flag)>> {
        Ok(vec![
            ("bgb_eq_b", self.bgb()),
            ("a1_bg_selfadjoint", self.left_selfadjoint()),
            ("a2_gb_selfadjoint", self.right_selfadjoint()?),
        ])
    }
}

/// Evaluates the defining equations of `kind` for the candidate `G`.
///
/// `a1` weights the residual space of `B`, `a2` the solution space; `m` is
/// only consulted for [`InverseKind::Restricted`].
pub fn inverse_check(
    a1: &PsdOperator,
    a2: Option<&PsdOperator>,
    b: &Matrix,
    g: &Matrix,
    kind: InverseKind,
    m: Option<&Subspace>,
    tol: &Tolerances,
) -> Result<InverseReport> {
    check_finite(b)?;
    check_finite(g)?;
    let (rows, cols) = b.shape();
    if a1.dim() != rows {
        return Err(Error::dims("weight vs. operator rows", a1.dim(), rows));
    }
    if g.shape() != (cols, rows) {
        return Err(Error::dims(
            "candidate inverse",
            format!("{cols}x{rows}"),
            format!("{}x{}", g.nrows(), g.ncols()),
        ));
    }
    if kind.needs_solution_weight() {
        match a2 {
            None => return Err(Error::MissingInput("solution-space weight A2")),
            Some(a2) if a2.dim() != cols => {
                return Err(Error::dims(
                    "solution weight vs. operator columns",
                    cols,
                    a2.dim(),
                ))
            }
            _ => {}
        }
    }

    let mut norms = vec![a1.fro_norm(), fro(b), fro(g)];
    norms.extend(a2.map(|a| a.fro_norm()));
    let ctx = Ctx {
        a1: a1.matrix(),
        a2: a2.map(|a| a.matrix()),
        b,
        g,
        thr: tol.threshold(&norms),
    };

    let mut equivalence = None;
    let equations = match kind {
        InverseKind::AInverse => vec![("normal_equation", ctx.normal())],
        InverseKind::Restricted => {
            let m = m.ok_or(Error::MissingInput("restriction subspace M"))?;
            if m.ambient_dim() != cols {
                return Err(Error::dims("restriction subspace", cols, m.ambient_dim()));
            }
            let bha = b.adjoint() * ctx.a1;
            let projected = m.basis().adjoint() * (&bha * b * g - bha);
            vec![
                ("range_in_m", Flag::new(m.containment_residual(g), ctx.thr)),
                ("projected_normal_equation", ctx.flag(projected)),
            ]
        }
        InverseKind::A1A2 => {
            let kernel = weighted_kernel(a1, b, tol)?;
            let leak = kernel.basis().adjoint() * ctx.a2()? * g;
            vec![
                ("normal_equation", ctx.normal()),
                ("a2_range_orthogonal", ctx.flag(leak)),
            ]
        }
        InverseKind::WeakA1A2 => {
            let a2m = ctx.a2()?;
            vec![
                ("a1_bgb_eq_a1_b", ctx.flag(ctx.a1 * (b * g * b - b))),
                ("a1_bg_selfadjoint", ctx.left_selfadjoint()),
                ("a2_gbg_eq_a2_g", ctx.flag(a2m * (g * b * g - g))),
                ("a2_gb_selfadjoint", ctx.right_selfadjoint()?),
            ]
        }
        InverseKind::Wgi => vec![
            ("bgb_eq_b", ctx.bgb()),
            ("gbg_eq_g", ctx.gbg()),
            ("a1_bg_selfadjoint", ctx.left_selfadjoint()),
            ("a2_gb_selfadjoint", ctx.right_selfadjoint()?),
        ],
        InverseKind::WeakWgiSystem => {
            let a2 = a2.expect("checked above");
            let bg = b * g;
            let left = weighted_projection_membership(a1, &range_of(b, tol)?, &bg, tol)?;
            let i_gb = Matrix::identity(cols, cols) - g * b;
            let right = weighted_projection_membership(a2, &kernel_of(b, tol)?, &i_gb, tol)?;
            let three = ctx.three_equation()?;
            let system = left.flag().and(right.flag());
            let three_flag = all(&three);
            equivalence = Some(EquivalenceCheck {
                system,
                three_equation: three_flag,
                agree: system.passed == three_flag.passed,
            });
            let mut eqs = vec![
                ("bg_in_pi_a1_range", left.flag()),
                ("complement_in_pi_a2_kernel", right.flag()),
            ];
            eqs.extend(three);
            return Ok(InverseReport {
                kind,
                passed: system.passed,
                equations: eqs,
                equivalence,
            });
        }
    };
    Ok(InverseReport {
        kind,
        passed: equations.iter().all(|(_, f)| f.passed),
        equations,
        equivalence,
    })
}
