// Cross-alphabet closure: checking a finite cotheory sample for the ideal
// and preimage-closure conditions.

use varietas::lang::{Alphabet, FreeMonoidHom, RegularLanguage};
use varietas::varieties::{
    check_cotheory, derivative_closure, generated_local_variety, CotheorySample, VarietyFamily,
};

fn main() -> anyhow::Result<()> {
    let sigma = Alphabet::new("ab")?;
    let delta = Alphabet::new("c")?;
    let g = FreeMonoidHom::new(delta.clone(), sigma.clone(), vec!["ab".into()])?;

    let sigma_family = derivative_closure(&RegularLanguage::from_regex("(ab)*")?).variety;
    println!("Σ-family member has {} languages", sigma_family.len());

    // the preimage family must land inside some Δ-member; generate one that works
    let preimages: Vec<RegularLanguage> = sigma_family
        .languages()
        .iter()
        .map(|l| l.preimage(&g))
        .collect::<Result<_, _>>()?;
    let delta_member = generated_local_variety(delta.clone(), preimages)?;
    println!("generated Δ-member has {} languages:", delta_member.len());
    for l in delta_member.languages() {
        println!("  {}", l.summary());
    }

    let sample = CotheorySample {
        families: vec![
            VarietyFamily {
                alphabet: sigma.clone(),
                members: vec![sigma_family.clone()],
            },
            VarietyFamily {
                alphabet: delta.clone(),
                members: vec![delta_member],
            },
        ],
        homs: vec![g.clone()],
    };
    let report = check_cotheory(&sample);
    println!("well-formed sample passes: {}", report.passed());

    // an undersized Δ-family is caught with a witness
    let broken = CotheorySample {
        families: vec![
            VarietyFamily {
                alphabet: sigma,
                members: vec![sigma_family],
            },
            VarietyFamily {
                alphabet: delta.clone(),
                members: vec![varietas::varieties::LocalBasicVariety::collect(
                    delta.clone(),
                    [RegularLanguage::empty(delta)],
                )?],
            },
        ],
        homs: vec![g],
    };
    for v in &check_cotheory(&broken).violations {
        println!("violation [{}]: {}", v.kind, v.detail);
    }
    Ok(())
}
