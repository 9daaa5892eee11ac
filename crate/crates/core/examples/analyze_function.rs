//! Spectra, algebraic normal form and the full property report of a function.
//!
//! ```bash
//! cargo run --example analyze_function
//! ```

use cognate::bf::{
    algebraic_immunity, autocorrelation, classify, moebius_transform, walsh_spectrum, TruthTable,
};

fn main() -> cognate::Result<()> {
    // x1x2 + x3x4, the smallest bent function with four variables
    let f = TruthTable::inner_product(4)?;
    println!("f          = {f}");
    println!("ANF        = {}", moebius_transform(&f));
    println!("Walsh      = {:?}", walsh_spectrum(&f).values());
    println!("autocorr.  = {:?}", autocorrelation(&f).values());
    println!("AI         = {}", algebraic_immunity(&f)?);

    // Majority of three: balanced, but not correlation immune.
    let maj: TruthTable = "00010111".parse()?;
    let report = classify(&maj);
    println!("\nmajority   = {maj}  ANF = {}", moebius_transform(&maj));
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}
