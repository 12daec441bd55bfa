//! Assembly of the branch bounds into the global lower bound for `K^3`.
//!
//! A minimal 3-fold of general type with `chi(O_X) <= 0` falls in one of four
//! branches: `p_g >= 2`, `q > 0`, or (`p_g = 1`, `q = 0`, `chi = 0`) with
//! `P_5 >= 5` or `P_5 <= 4`. Results proved elsewhere enter as cited axioms;
//! everything else is recomputed here.

use serde::{Deserialize, Serialize};

use crate::classify::{classify_small_p5, CaseReport, Solution};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::slope::{base_bounds, fiber_volume_bound, propagate, FiberData, DEFAULT_SCHEDULE};
use crate::xi::run_preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchId {
    #[serde(rename = "PG_GE_2")]
    PgGe2,
    #[serde(rename = "Q_POSITIVE")]
    QPositive,
    #[serde(rename = "P5_GE_5")]
    P5Ge5,
    #[serde(rename = "P5_LE_4")]
    P5Le4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    AxiomCited,
    Computed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Solution(Solution),
    Preset(String),
    Axiom(String),
}

/// One node of a branch's derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub label: String,
    pub bound: Rational,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

impl Leaf {
    fn axiom(label: &str, bound: Rational, citation: &str) -> Self {
        Leaf {
            label: label.to_string(),
            bound,
            provenance: Provenance::AxiomCited,
            citation: Some(citation.to_string()),
            command: None,
        }
    }

    fn computed(label: &str, bound: Rational, command: &str) -> Self {
        Leaf {
            label: label.to_string(),
            bound,
            provenance: Provenance::Computed,
            citation: None,
            command: Some(command.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchResult {
    pub branch: BranchId,
    pub bound: Rational,
    pub strict: bool,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivation: Vec<Leaf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainReport {
    pub branches: Vec<BranchResult>,
    pub global_bound: Rational,
    pub witness: Witness,
}

const PG_CITATION: &str = "external theorem: Vol(V) >= 1/3 for every 3-fold of general type with p_g >= 2";
const ALB_LOW_CITATION: &str =
    "external theorem: Albanese fibers of dimension <= 1 make |4K_V + P| birational, so P_4 >= 5";
const GH_CITATION: &str =
    "external theorem: relative minimal model over H has K_{X/H} nef, so K_X - 2F nef and K^3 >= 2 K_F^2";
const NOT_ONE_TWO_CITATION: &str =
    "external theorem: |4K_F| birational for fibers not of type (1,2), so |4K_V + P| is birational and P_4 >= 5";

fn preset_command(id: &str) -> String {
    format!("xi --preset {id}")
}

/// `min` over the listed presets, with the argmin (first on ties).
fn preset_minimum(ids: &[&str]) -> Result<(Rational, String, Vec<Leaf>)> {
    let mut leaves = Vec::new();
    let mut best: Option<(Rational, String)> = None;
    for &id in ids {
        let run = run_preset(id)?;
        leaves.push(Leaf::computed(
            &format!("preset {id}: xi >= {}", run.xi),
            run.volume.clone(),
            &preset_command(id),
        ));
        if best.as_ref().is_none_or(|(b, _)| run.volume < *b) {
            best = Some((run.volume, id.to_string()));
        }
    }
    let (bound, id) = best.ok_or_else(|| Error::InvalidArgument("no presets".into()))?;
    Ok((bound, id, leaves))
}

pub fn pg_ge_2_branch() -> BranchResult {
    BranchResult {
        branch: BranchId::PgGe2,
        bound: Rational::new(1, 3),
        strict: false,
        provenance: Provenance::AxiomCited,
        citation: Some(PG_CITATION.to_string()),
        command: None,
        witness: None,
        derivation: Vec::new(),
    }
}

/// Irregular case: the decision tree over the Albanese map.
pub fn q_positive_branch() -> Result<BranchResult> {
    let (p4_bound, p4_witness, mut leaves) = preset_minimum(&["i-a", "i-b", "i-c", "i-d"])?;
    let slope = propagate(&base_bounds(FiberData::ONE_TWO)?, &DEFAULT_SCHEDULE)?;
    let one_two = fiber_volume_bound(&slope, 9)?;

    leaves.push(Leaf::axiom("Albanese fiber dimension <= 1", p4_bound.clone(), ALB_LOW_CITATION));
    leaves.push(Leaf::axiom("Albanese image a curve H with g(H) >= 2", Rational::from_integer(2), GH_CITATION));
    leaves.push(Leaf::axiom("g(H) = 1, fiber not of type (1,2)", p4_bound.clone(), NOT_ONE_TWO_CITATION));
    leaves.push(Leaf::computed("g(H) = 1, fiber of type (1,2): nu(E_9) >= 1", one_two.clone(), "slope"));

    let bound = [p4_bound.clone(), Rational::from_integer(2), p4_bound, one_two]
        .into_iter()
        .min()
        .expect("non-empty");
    Ok(BranchResult {
        branch: BranchId::QPositive,
        bound,
        strict: false,
        provenance: Provenance::Computed,
        citation: None,
        command: Some(preset_command(&p4_witness)),
        witness: Some(Witness::Preset(p4_witness)),
        derivation: leaves,
    })
}

pub fn p5_ge_5_branch() -> Result<BranchResult> {
    let (bound, witness, leaves) = preset_minimum(&["ii-a", "ii-b", "iii-a", "iii-b"])?;
    Ok(BranchResult {
        branch: BranchId::P5Ge5,
        bound,
        strict: true,
        provenance: Provenance::Computed,
        citation: None,
        command: Some(preset_command(&witness)),
        witness: Some(Witness::Preset(witness)),
        derivation: leaves,
    })
}

pub const P5_LE_4_COMMAND: &str = "classify --chi 0 --p2 1 --p3 2 --p 4=3 --p 5=4 --rmax 50";

/// Minimum `K^3` over the classified baskets.
pub fn p5_le_4_branch(report: &CaseReport) -> Result<BranchResult> {
    let best = report
        .min_volume()
        .ok_or_else(|| Error::Infeasible("classification produced no solution".into()))?;
    Ok(BranchResult {
        branch: BranchId::P5Le4,
        bound: best.k3.clone(),
        strict: false,
        provenance: Provenance::Computed,
        citation: None,
        command: Some(P5_LE_4_COMMAND.to_string()),
        witness: Some(Witness::Solution(best.clone())),
        derivation: Vec::new(),
    })
}

/// Takes the minimum over the branches; strictness does not enter the comparison.
pub fn assemble_main(branches: Vec<BranchResult>) -> Result<MainReport> {
    let lowest = branches
        .iter()
        .min_by(|a, b| a.bound.cmp(&b.bound))
        .ok_or_else(|| Error::InvalidArgument("no branches".into()))?;
    let witness = match (&lowest.witness, &lowest.citation) {
        (Some(w), _) => w.clone(),
        (None, Some(c)) => Witness::Axiom(c.clone()),
        (None, None) => Witness::Axiom(String::new()),
    };
    Ok(MainReport { global_bound: lowest.bound.clone(), witness, branches })
}

pub fn prove_main() -> MainReport {
    let branches = vec![
        pg_ge_2_branch(),
        q_positive_branch().expect("fixed presets and slope chain"),
        p5_ge_5_branch().expect("fixed presets"),
        p5_le_4_branch(&classify_small_p5()).expect("classification is non-empty"),
    ];
    assemble_main(branches).expect("four branches")
}
