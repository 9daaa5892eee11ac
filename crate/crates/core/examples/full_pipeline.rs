//! The whole flow: nominal bent function → cognate ensemble → strike-down →
//! components → 4×4 substitution table → election among candidate tables.
//!
//! ```bash
//! cargo run --example full_pipeline
//! ```

use cognate::ahp::{synthesize, ComparisonMatrix, DecisionSpec};
use cognate::bf::TruthTable;
use cognate::cognate::{filter_ensemble, initial_ensemble};
use cognate::sbox::{build_sbox, sbox_report, SboxReport};
use cognate::search::ConstraintSystem;
use std::path::Path;

fn main() -> cognate::Result<()> {
    let nominal = TruthTable::inner_product(4)?;
    let cs = ConstraintSystem::new(4)?
        .min_nonlinearity(4)
        .max_absolute_indicator(8);
    let outcome = filter_ensemble(&initial_ensemble(&nominal), &cs)?;
    println!("kept {} of {}", outcome.kept(), outcome.total());

    // Candidate tables from windows of four surviving single-flip members
    // (a member next to its own complement would give a constant combination).
    let members: Vec<TruthTable> = outcome
        .working
        .members()
        .iter()
        .filter(|m| !m.complemented)
        .map(|m| m.table.clone())
        .collect();
    let mut candidates: Vec<(String, SboxReport)> = Vec::new();
    for start in (0..members.len().saturating_sub(3)).step_by(3) {
        let s = build_sbox(&members[start..start + 4])?;
        candidates.push((format!("table{}", start / 3), sbox_report(&s)));
    }
    for (label, r) in &candidates {
        println!(
            "{label}: min NL {}, max |Δ| {}, bijective {:?}",
            r.min_nonlinearity, r.max_absolute_indicator, r.bijective
        );
    }

    let spec = DecisionSpec::parse(
        "criteria = weights.txt\n\
         nl = measured benefit min_nonlinearity\n\
         ac = measured cost max_absolute_indicator\n",
    )?;
    let problem = spec.resolve(Path::new("."), &candidates, |_| {
        Ok(ComparisonMatrix::parse("1 3\n1/3 1\n")?.to_text())
    })?;
    let ranking = synthesize(&problem)?;
    println!(
        "elected {} (score {:.4})",
        ranking.elected, ranking.ranking[0].score
    );
    Ok(())
}
