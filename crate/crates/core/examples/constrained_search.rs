//! Steepest-ascent search for a function meeting a restriction system.
//!
//! ```bash
//! cargo run --example constrained_search
//! ```

use cognate::search::{gradient_descent_search, ConstraintSystem, SearchConfig};
use cognate::Error;

fn main() -> cognate::Result<()> {
    let cs = ConstraintSystem::parse(
        "n = 6\nrequire_balanced = true\nmin_nonlinearity = 24\nmax_absolute_indicator = 32\n",
        None,
    )?;
    let found = gradient_descent_search(&cs, &SearchConfig::with_seed(2024))?;
    println!(
        "found {} after {} iterations (restart {})",
        found.table, found.total_iterations, found.restart
    );
    println!(
        "nonlinearity {}, absolute indicator {}, degree {}",
        found.report.nonlinearity, found.report.absolute_indicator, found.report.algebraic_degree
    );

    // Resilient functions: balanced and first-order correlation immune.
    let resilient = ConstraintSystem::new(6)?.balanced().min_ci_order(1);
    let r = gradient_descent_search(&resilient, &SearchConfig::with_seed(1))?;
    println!(
        "\n1-resilient {}: nonlinearity {}, degree {}",
        r.table, r.report.nonlinearity, r.report.algebraic_degree
    );

    // Bounds beyond the covering radius are refused before any search.
    let impossible = ConstraintSystem::new(4)?.min_nonlinearity(7);
    match gradient_descent_search(&impossible, &SearchConfig::default()) {
        Err(Error::Search(f)) => println!("\n{f}"),
        other => println!("\nunexpected: {other:?}"),
    }
    Ok(())
}
