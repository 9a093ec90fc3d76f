// Measure-many quantum automata: exact accept probabilities, bounded-error
// margins, the two measurement modes, and the closure-evidence probe.

use varietas::lang::{Context, RegularLanguage};
use varietas::qfa::{
    basic_variety_probe, margin_report, parity_machine, rotation_machine, MeasureMode,
};

fn main() -> anyhow::Result<()> {
    let rotation = rotation_machine(std::f64::consts::FRAC_PI_4);
    println!("45° rotation machine:");
    for w in ["", "a", "aa", "aaa"] {
        let trace = rotation.simulate(w, MeasureMode::Subspace)?;
        println!(
            "  p_acc({w:?}) = {:.6}   (conservation residual {:.1e})",
            trace.p_acc(),
            trace.conservation_residual()
        );
    }

    let parity = parity_machine();
    let even = RegularLanguage::from_regex("(aa)*")?;
    let report = margin_report(&parity, &even, 6, MeasureMode::Subspace)?;
    println!(
        "parity machine vs (aa)* up to length 6: min accept {:?}, max off {:?}, p = {:?}",
        report.min_accept, report.max_accept_complement, report.bounded_error_p
    );

    // the rotation machine cannot separate the nonempty words at 1/2
    let nonempty = RegularLanguage::from_regex("aa*")?;
    let report = margin_report(&rotation, &nonempty, 4, MeasureMode::Subspace)?;
    println!(
        "rotation vs aa*: bounded-error verdict {:?}",
        report.bounded_error_p
    );

    // both measurement modes agree when at most one basis state survives
    for w in ["a", "aa", "aaa"] {
        let s = rotation.accept_probability(w, MeasureMode::Subspace)?;
        let b = rotation.accept_probability(w, MeasureMode::Basis)?;
        println!("  modes on {w:?}: subspace {s:.6} vs basis {b:.6}");
    }

    let probe = basic_variety_probe(
        &parity,
        &[Context::new("a", "")],
        &[],
        5,
        MeasureMode::Subspace,
    )?;
    println!("closure probe (evidence only, non-conclusive):");
    for entry in &probe.entries {
        println!(
            "  {}: cut {}/{} words, margin from 1/2: {:.3}",
            entry.label, entry.cut_size, entry.words_checked, entry.threshold_margin
        );
    }
    Ok(())
}
