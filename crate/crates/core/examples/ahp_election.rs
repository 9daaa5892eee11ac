//! Pairwise-comparison hierarchy: priorities, consistency and election.
//!
//! ```bash
//! cargo run --example ahp_election
//! ```

use cognate::ahp::{
    priority_vector, synthesize, ComparisonMatrix, Criterion, DecisionProblem, Direction, Scoring,
};

fn main() -> cognate::Result<()> {
    let criteria = ComparisonMatrix::parse(
        "# nonlinearity, absolute indicator, designer preference\n\
         1   3   5\n\
         1/3 1   3\n\
         0.2 1/3 1\n",
    )?;
    let pv = priority_vector(&criteria)?;
    println!(
        "criteria weights {:.4?}, lambda_max {:.4}, CR {:.4}",
        pv.weights,
        pv.lambda_max,
        pv.consistency_ratio.unwrap_or(f64::NAN)
    );

    let problem = DecisionProblem {
        criteria_matrix: criteria,
        criteria: vec![
            Criterion {
                name: "nonlinearity".into(),
                scoring: Scoring::Measured {
                    direction: Direction::Benefit,
                    values: vec![4.0, 6.0, 4.0],
                },
            },
            Criterion {
                name: "absolute_indicator".into(),
                scoring: Scoring::Measured {
                    direction: Direction::Cost,
                    values: vec![8.0, 16.0, 4.0],
                },
            },
            Criterion {
                name: "preference".into(),
                scoring: Scoring::Judgment(ComparisonMatrix::parse("1 2 4\n1/2 1 2\n1/4 1/2 1\n")?),
            },
        ],
        alternatives: vec!["f1".into(), "f2".into(), "f3".into()],
    };
    let ranking = synthesize(&problem)?;
    for r in &ranking.ranking {
        println!("  {} {:.4}", r.label, r.score);
    }
    println!("elected {}", ranking.elected);
    Ok(())
}
