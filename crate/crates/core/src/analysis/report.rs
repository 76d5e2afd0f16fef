use super::convergence_rates;

/// Errors and diagnostics of one refinement level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub n: usize,
    pub h: f64,
    pub l2_u: f64,
    pub energy_u: f64,
    pub l2_v: f64,
    pub j_semi: f64,
    pub max_uh: f64,
    pub residual: f64,
    pub solve_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelFailure {
    pub n: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorColumn {
    L2U,
    EnergyU,
    L2V,
    JSemi,
}

impl ErrorColumn {
    pub const ALL: [ErrorColumn; 4] = [ErrorColumn::L2U, ErrorColumn::EnergyU, ErrorColumn::L2V, ErrorColumn::JSemi];

    pub fn of(&self, level: &LevelRecord) -> f64 {
        match self {
            ErrorColumn::L2U => level.l2_u,
            ErrorColumn::EnergyU => level.energy_u,
            ErrorColumn::L2V => level.l2_v,
            ErrorColumn::JSemi => level.j_semi,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ErrorColumn::L2U => "‖u − u_h‖",
            ErrorColumn::EnergyU => "|||u − u_h|||",
            ErrorColumn::L2V => "‖v − v_h‖",
            ErrorColumn::JSemi => "J(e_u, e_u)^½",
        }
    }

    pub fn slug(&self) -> &'static str {
        match self {
            ErrorColumn::L2U => "l2_u",
            ErrorColumn::EnergyU => "energy_u",
            ErrorColumn::L2V => "l2_v",
            ErrorColumn::JSemi => "j_semi",
        }
    }
}

/// Results of a refinement study, levels ordered by increasing `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub degree: usize,
    pub exponent: i32,
    pub sigma0: f64,
    pub sigma1: f64,
    pub levels: Vec<LevelRecord>,
    pub failures: Vec<LevelFailure>,
}

impl ConvergenceReport {
    pub fn h(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.h).collect()
    }

    pub fn column(&self, column: ErrorColumn) -> Vec<f64> {
        self.levels.iter().map(|l| column.of(l)).collect()
    }

    /// One entry per level; `None` on the first level or where the rate is
    /// undefined.
    pub fn rates(&self, column: ErrorColumn) -> Vec<Option<f64>> {
        let mut out = vec![None; self.levels.len()];
        for k in 1..self.levels.len() {
            let (a, b) = (&self.levels[k - 1], &self.levels[k]);
            if let Ok(r) = convergence_rates(&[a.h, b.h], &[column.of(a), column.of(b)]) {
                out[k] = Some(r[0]);
            }
        }
        out
    }

    /// Rate between the last two levels.
    pub fn terminal_rate(&self, column: ErrorColumn) -> Option<f64> {
        self.rates(column).last().copied().flatten()
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}
