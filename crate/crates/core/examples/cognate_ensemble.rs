//! The initial ensemble of cognate functions around a nominal function and
//! its strike-down by a restriction system.
//!
//! ```bash
//! cargo run --example cognate_ensemble
//! ```

use cognate::bf::TruthTable;
use cognate::cognate::{cognate_proximity, filter_ensemble, initial_ensemble};
use cognate::search::ConstraintSystem;

fn main() -> cognate::Result<()> {
    let nominal: TruthTable = "0001011001111000".parse()?;
    let ensemble = initial_ensemble(&nominal);
    println!("nominal {nominal}: {} cognate functions", ensemble.len());
    for m in ensemble.members().iter().take(4) {
        println!(
            "  flip {:2} complemented {:5} -> {}  C_gn = {}",
            m.flipped_index,
            m.complemented,
            m.table,
            cognate_proximity(&nominal, &m.table)?
        );
    }

    let cs = ConstraintSystem::new(4)?.max_absolute_indicator(8);
    let outcome = filter_ensemble(&ensemble, &cs)?;
    println!("\nkept {} of {}", outcome.kept(), outcome.total());
    if let Some(r) = outcome.rejected.first() {
        println!("first rejection: member {} ({})", r.index, r.binding());
    }
    print!("\n{}", outcome.export(false));
    Ok(())
}
