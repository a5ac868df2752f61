//! Integer-program export for magic labelling tasks.
//!
//! For a target constant K the model uses n^2 binary assignment variables
//! x_i_j (element with index i receives label j), one nonnegative deviation
//! variable y per target element, row/column constraints forcing a bijection,
//! and a constraint pair per target linearizing |weight - K|. The model's
//! optimum is 0 exactly when a magic labelling with constant K exists. No
//! solver is invoked here; the model is written in the common LP text format.

use std::io::Write;

use thiserror::Error;

use crate::graph::{Element, ElementClass, Graph};
use crate::labelling::{
    contributors, feasible_magic_interval, DomainSelector, LabelKind, Labelling, LabellingError,
    TargetKind, Weight,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IlpError {
    #[error("only magic tasks have an integer-program formulation")]
    NonMagicKind,
    #[error("model has no constraints")]
    EmptyModel,
    #[error("write failed: {0}")]
    Io(String),
    #[error(transparent)]
    Labelling(#[from] LabellingError),
}

/// Index of a variable within [`IlpModel::variables`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarKind {
    Binary,
    /// Continuous with lower bound 0.
    Nonnegative,
}

#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// A solver-agnostic in-memory integer program for one magic labelling task.
#[derive(Clone, Debug)]
pub struct IlpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Minimized: the sum of the deviation variables.
    pub objective: Vec<(VarId, i64)>,
    /// Universe elements in index order; the element with 1-based index i is
    /// `universe[i-1]`.
    pub universe: Vec<Element>,
    pub target: ElementClass,
    pub constant: i64,
}

impl IlpModel {
    pub fn n(&self) -> usize {
        self.universe.len()
    }

    pub fn target_count(&self) -> usize {
        self.objective.len()
    }

    /// Variable id of x_i_j for 1-based element index i and label j.
    pub fn x_var(&self, i: usize, j: usize) -> VarId {
        debug_assert!((1..=self.n()).contains(&i) && (1..=self.n()).contains(&j));
        VarId((i - 1) * self.n() + (j - 1))
    }

    /// Variable id of the deviation variable of the k-th target (1-based).
    pub fn y_var(&self, k: usize) -> VarId {
        debug_assert!((1..=self.target_count()).contains(&k));
        VarId(self.n() * self.n() + (k - 1))
    }

    /// Encodes a labelling as the 0/1 point of the assignment variables.
    pub fn assignment_point(&self, l: &Labelling) -> Vec<u8> {
        let n = self.n();
        let mut x = vec![0u8; n * n];
        for (idx, &element) in self.universe.iter().enumerate() {
            let label = l.label(element) as usize;
            if (1..=n).contains(&label) {
                x[idx * n + (label - 1)] = 1;
            }
        }
        x
    }

    /// Minimal feasible objective at a fixed assignment point: each
    /// deviation variable must cover |weight - K|, so the optimum given x
    /// is the sum of those absolute deviations.
    pub fn min_objective_at(&self, x: &[u8]) -> i64 {
        let n = self.n();
        let mut total = 0i64;
        for k in 1..=self.target_count() {
            // dev_lo_k carries the weight expression of target k with +1
            // coefficients; skip its leading y term.
            let row = &self.constraints[2 * n + 2 * (k - 1)];
            let mut weight = 0i64;
            for &(VarId(v), coeff) in &row.terms {
                if v < n * n && x[v] != 0 {
                    weight += coeff;
                }
            }
            total += (weight - self.constant).abs();
        }
        total
    }
}

/// Builds the integer program for a magic task with fixed constant `k`.
/// Callers sweeping the constant iterate over [`constant_sweep`].
pub fn build_ilp(
    g: &Graph,
    selector: DomainSelector,
    tk: TargetKind,
    k: i64,
) -> Result<IlpModel, IlpError> {
    if !matches!(tk.kind, LabelKind::Magic) {
        return Err(IlpError::NonMagicKind);
    }
    if selector.is_empty() {
        return Err(IlpError::Labelling(LabellingError::EmptySelector));
    }
    if g.class_count(tk.target) == 0 {
        return Err(IlpError::Labelling(LabellingError::EmptyTargetClass(
            tk.target,
        )));
    }

    let universe = selector.universe(g);
    let n = universe.len();
    let target_count = g.class_count(tk.target);

    let mut variables = Vec::with_capacity(n * n + target_count);
    for i in 1..=n {
        for j in 1..=n {
            variables.push(Variable {
                name: format!("x_{i}_{j}"),
                kind: VarKind::Binary,
            });
        }
    }
    for t in 1..=target_count {
        variables.push(Variable {
            name: format!("y_{t}"),
            kind: VarKind::Nonnegative,
        });
    }

    let x = |i: usize, j: usize| VarId((i - 1) * n + (j - 1));
    let y = |t: usize| VarId(n * n + (t - 1));

    let mut constraints = Vec::with_capacity(2 * n + 2 * target_count);
    // each element receives exactly one label
    for i in 1..=n {
        constraints.push(Constraint {
            name: format!("row_{i}"),
            terms: (1..=n).map(|j| (x(i, j), 1)).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    // each label is used exactly once
    for j in 1..=n {
        constraints.push(Constraint {
            name: format!("col_{j}"),
            terms: (1..=n).map(|i| (x(i, j), 1)).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    // per target: y covers the absolute deviation of the weight from k
    for (t0, set) in contributors(g, selector, tk.target).iter().enumerate() {
        let t = t0 + 1;
        let mut weight_terms: Vec<(VarId, i64)> = Vec::with_capacity(set.len() * n);
        for &u in set {
            for j in 1..=n {
                weight_terms.push((x(u + 1, j), j as i64));
            }
        }
        let mut lo_terms = vec![(y(t), 1i64)];
        lo_terms.extend(weight_terms.iter().copied());
        constraints.push(Constraint {
            name: format!("dev_lo_{t}"),
            terms: lo_terms,
            sense: Sense::Ge,
            rhs: k,
        });
        let mut hi_terms = vec![(y(t), 1i64)];
        hi_terms.extend(weight_terms.iter().map(|&(v, c)| (v, -c)));
        constraints.push(Constraint {
            name: format!("dev_hi_{t}"),
            terms: hi_terms,
            sense: Sense::Ge,
            rhs: -k,
        });
    }

    Ok(IlpModel {
        variables,
        constraints,
        objective: (1..=target_count).map(|t| (y(t), 1)).collect(),
        universe,
        target: tk.target,
        constant: k,
    })
}

/// Feasible magic constants for a sweep, from the crude weight bounds.
pub fn constant_sweep(
    g: &Graph,
    selector: DomainSelector,
    target: ElementClass,
) -> Option<(Weight, Weight)> {
    feasible_magic_interval(g, selector, target)
}

fn write_terms(
    out: &mut impl Write,
    terms: &[(VarId, i64)],
    names: &[Variable],
) -> std::io::Result<()> {
    let mut line_len = 6usize;
    for (pos, &(VarId(v), coeff)) in terms.iter().enumerate() {
        let name = &names[v].name;
        let piece = if pos == 0 {
            match coeff {
                1 => name.clone(),
                -1 => format!("- {name}"),
                c if c < 0 => format!("- {} {name}", -c),
                c => format!("{c} {name}"),
            }
        } else {
            match coeff {
                1 => format!(" + {name}"),
                -1 => format!(" - {name}"),
                c if c < 0 => format!(" - {} {name}", -c),
                c => format!(" + {c} {name}"),
            }
        };
        if line_len + piece.len() > 76 {
            write!(out, "\n   ")?;
            line_len = 3;
        }
        write!(out, "{piece}")?;
        line_len += piece.len();
    }
    Ok(())
}

/// Serializes the model in LP text format: objective, constraints, bounds,
/// and binary declarations. The layout is deterministic, so identical models
/// produce identical bytes.
pub fn write_model(model: &IlpModel, out: &mut impl Write) -> Result<(), IlpError> {
    if model.constraints.is_empty() {
        return Err(IlpError::EmptyModel);
    }
    write_model_io(model, out).map_err(|e| IlpError::Io(e.to_string()))
}

fn write_model_io(model: &IlpModel, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "\\ magic labelling assignment model: n={} targets={} K={}",
        model.n(),
        model.target_count(),
        model.constant
    )?;
    writeln!(out, "Minimize")?;
    write!(out, " obj: ")?;
    write_terms(out, &model.objective, &model.variables)?;
    writeln!(out)?;
    writeln!(out, "Subject To")?;
    for c in &model.constraints {
        write!(out, " {}: ", c.name)?;
        write_terms(out, &c.terms, &model.variables)?;
        let sense = match c.sense {
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        writeln!(out, " {} {}", sense, c.rhs)?;
    }
    writeln!(out, "Bounds")?;
    for v in &model.variables {
        if v.kind == VarKind::Nonnegative {
            writeln!(out, " {} >= 0", v.name)?;
        }
    }
    writeln!(out, "Binary")?;
    let mut line_len = 0usize;
    for v in &model.variables {
        if v.kind != VarKind::Binary {
            continue;
        }
        if line_len > 0 && line_len + 1 + v.name.len() > 76 {
            writeln!(out)?;
            line_len = 0;
        }
        write!(out, " {}", v.name)?;
        line_len += 1 + v.name.len();
    }
    writeln!(out)?;
    writeln!(out, "End")?;
    Ok(())
}
