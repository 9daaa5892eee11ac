//! Component functions stacked into a substitution table, and the
//! table-level report over every nonzero combination of components.
//!
//! ```bash
//! cargo run --example substitution_table
//! ```

use cognate::bf::TruthTable;
use cognate::sbox::{build_sbox, sbox_report, SubstitutionTable};

fn main() -> cognate::Result<()> {
    // Coordinates x1..x4 rebuild the identity.
    let coords = (0..4)
        .map(|i| TruthTable::variable(4, i))
        .collect::<cognate::Result<Vec<_>>>()?;
    let identity = build_sbox(&coords)?;
    assert_eq!(identity, SubstitutionTable::identity(4)?);
    let r = sbox_report(&identity);
    println!(
        "identity: bijective {:?}, min nonlinearity {}",
        r.bijective, r.min_nonlinearity
    );

    // The 4-bit table of the PRESENT cipher.
    let present = SubstitutionTable::parse("n=4 m=4\nc 5 6 b 9 0 a d 3 e f 8 4 7 1 2\n")?;
    let r = sbox_report(&present);
    println!(
        "PRESENT: bijective {:?}, min nonlinearity {}, max absolute indicator {}",
        r.bijective, r.min_nonlinearity, r.max_absolute_indicator
    );
    for c in r.combinations.iter().take(3) {
        println!(
            "  mask {:04b}: nonlinearity {}",
            c.mask, c.report.nonlinearity
        );
    }
    print!("\n{}", present.to_text());
    Ok(())
}
