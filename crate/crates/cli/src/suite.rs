use bowling::cabled::{
    all_words, check_cabled_braid_relation, check_cabled_far_commutativity, check_cabled_formula,
    check_cabled_stochastic, check_micro_order_invariance, check_oracle_placement_invariance,
    check_unit_cable, MAX_ORACLE_CABLE,
};
use bowling::multiball::{
    check_braid_relation, check_far_commutativity, check_hecke, check_hecke_with, check_inverse,
    check_specht, check_specializations, check_stochastic, generator_matrix,
};
use bowling::qpoly::QScalar;
use bowling::{CheckReport, QPoly};
use clap::ValueEnum;

use crate::{check_dim, Failure};

/// Longest words enumerated by the stochastic and unit-cable checks.
const WORD_LENGTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Braid,
    Hecke,
    Specht,
    Cabled,
    Stochastic,
    All,
}

pub struct SuiteParams {
    pub strands: usize,
    pub capacity: u32,
    pub cable: u32,
    pub window: Option<usize>,
    pub inject_fault: bool,
}

pub struct Outcome {
    reports: Vec<CheckReport>,
    skipped: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "checks": self.reports,
            "skipped": self.skipped,
        })
    }

    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&format!("{r}\n"));
        }
        for s in &self.skipped {
            out.push_str(&format!("SKIP {s}\n"));
        }
        let failed = self.reports.iter().filter(|r| !r.passed).count();
        out.push_str(&format!(
            "{} check(s), {} failed\n",
            self.reports.len(),
            failed
        ));
        out
    }
}

fn braid(p: &SuiteParams, out: &mut Outcome) -> Result<(), Failure> {
    out.reports
        .push(check_braid_relation(p.strands, p.capacity)?);
    if p.strands >= 4 {
        out.reports
            .push(check_far_commutativity(p.strands, p.capacity)?);
    }
    Ok(())
}

fn hecke(p: &SuiteParams, out: &mut Outcome) -> Result<(), Failure> {
    let (n, cap) = (p.strands, p.capacity);
    let report = if p.inject_fault {
        check_hecke_with(n, cap, |i| {
            let mut g = generator_matrix(n, cap, i)?;
            if i == 1 {
                g.set(0, 0, QPoly::q());
            }
            Ok(g)
        })?
    } else {
        check_hecke(n, cap)?
    };
    out.reports.push(report);
    for x in ["1/2", "2", "-1"] {
        let x: QScalar = bowling::qpoly::parse_scalar(x)?;
        out.reports.push(check_inverse(n, cap, &x)?);
    }
    Ok(())
}

fn specht(p: &SuiteParams, out: &mut Outcome) -> Result<(), Failure> {
    let windows: Vec<usize> = match p.window {
        Some(k) => vec![k],
        None => (1..=p.strands.saturating_sub(p.capacity as usize + 1)).collect(),
    };
    if windows.is_empty() {
        return Err(Failure::Usage(format!(
            "the Specht check needs n >= N + 2 = {}",
            p.capacity + 2
        )));
    }
    for k in windows {
        out.reports.push(check_specht(p.strands, p.capacity, k)?);
    }
    Ok(())
}

fn cabled(p: &SuiteParams, out: &mut Outcome) -> Result<(), Failure> {
    let (n, cable) = (p.strands, p.cable);
    if cable == 0 || cable > MAX_ORACLE_CABLE {
        return Err(Failure::Usage(format!(
            "--cable must lie in 1..={MAX_ORACLE_CABLE} for the lane-level checks"
        )));
    }
    check_dim(n, cable)?;
    out.reports.push(check_cabled_formula(cable)?);
    out.reports.push(check_micro_order_invariance(cable)?);
    for a in 0..=cable {
        for b in 0..=cable {
            out.reports
                .push(check_oracle_placement_invariance(cable, a, b)?);
        }
    }
    if n >= 3 {
        out.reports.push(check_cabled_braid_relation(n, cable)?);
    }
    if n >= 4 {
        out.reports.push(check_cabled_far_commutativity(n, cable)?);
    }
    let words = all_words(n, WORD_LENGTH)?;
    out.reports.push(check_cabled_stochastic(&words, cable)?);
    out.reports.push(check_unit_cable(&words)?);
    Ok(())
}

fn stochastic(p: &SuiteParams, out: &mut Outcome) -> Result<(), Failure> {
    let words = all_words(p.strands, WORD_LENGTH)?;
    out.reports.push(check_stochastic(&words, p.capacity)?);
    if p.strands >= 2 {
        out.reports
            .push(check_specializations(p.strands, p.capacity)?);
    }
    Ok(())
}

/// Validates the size flags, then runs the requested checks.
pub fn run(suite: Suite, p: &SuiteParams) -> Result<Outcome, Failure> {
    check_dim(p.strands, p.capacity)?;
    let mut out = Outcome {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    let n = p.strands;
    match suite {
        Suite::Braid => braid(p, &mut out)?,
        Suite::Hecke => hecke(p, &mut out)?,
        Suite::Specht => specht(p, &mut out)?,
        Suite::Cabled => cabled(p, &mut out)?,
        Suite::Stochastic => stochastic(p, &mut out)?,
        Suite::All => {
            // validate every flag before running anything
            if p.cable == 0 || p.cable > MAX_ORACLE_CABLE {
                return Err(Failure::Usage(format!(
                    "--cable must lie in 1..={MAX_ORACLE_CABLE}"
                )));
            }
            check_dim(n, p.cable)?;
            if n >= 3 {
                braid(p, &mut out)?;
            } else {
                out.skipped.push("braid (needs n >= 3)".into());
            }
            if n >= 2 {
                hecke(p, &mut out)?;
            } else {
                out.skipped.push("hecke (needs n >= 2)".into());
            }
            if n >= p.capacity as usize + 2 {
                specht(p, &mut out)?;
            } else {
                out.skipped
                    .push(format!("specht (needs n >= N + 2 = {})", p.capacity + 2));
            }
            cabled(p, &mut out)?;
            stochastic(p, &mut out)?;
        }
    }
    Ok(out)
}
