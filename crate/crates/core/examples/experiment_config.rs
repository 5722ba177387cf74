//! Build an experiment config in code, run it and write the artefacts.

use mixlab::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use mixlab::{ConvexBody, Result};

pub fn main() -> Result<()> {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Bound, 0.01);
    cfg.body = Some(ConvexBody::interval(-0.5, 0.5)?);
    cfg.alphas = vec![1.0, 2.0, 8.0];
    cfg.validate()?;
    println!("{}", cfg.to_json()?);

    let out = run_experiment(&cfg, None)?;
    let dir = std::env::temp_dir().join("mixlab-example-bound");
    out.write_to(&dir)?;
    println!(
        "wrote {:?} to {}",
        out.files.iter().map(|f| &f.0).collect::<Vec<_>>(),
        dir.display()
    );
    print!(
        "{}",
        String::from_utf8_lossy(out.file("bounds.csv").unwrap_or_default())
    );
    assert!(out.passed());
    Ok(())
}
