//! Tight and Chen influence functions side by side.

use catoni_cs::{chen_coefficient, tight_coefficient, InfluenceSpec};

fn main() -> catoni_cs::Result<()> {
    println!("alpha  tight     chen");
    for alpha in [0.1, 0.25, 0.5, 0.75, 1.0] {
        println!(
            "{alpha:<5}  {:.6}  {:.6}",
            tight_coefficient(alpha)?,
            chen_coefficient(alpha)?
        );
    }

    let alpha = 0.5;
    let tight = InfluenceSpec::tight(alpha)?;
    let chen = InfluenceSpec::chen(alpha)?;
    println!("\nalpha = {alpha}");
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10}",
        "x", "lower", "psi", "upper", "psi_chen"
    );
    for x in [-100.0, -10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0, 100.0] {
        println!(
            "{x:>8} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            tight.lower_envelope(x),
            tight.psi(x),
            tight.upper_envelope(x),
            chen.psi(x)
        );
    }
    Ok(())
}
