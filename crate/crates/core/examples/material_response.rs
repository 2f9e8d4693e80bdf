//! Permittivity of the built-in material models along the imaginary axis.
//!
//! Run with `cargo run --example material_response`.

use lifshitz::kernel::matsubara_frequency;
use lifshitz::{MaterialModel, OscillatorTerm};

fn main() -> lifshitz::Result<()> {
    let materials = [
        ("vacuum", MaterialModel::vacuum()),
        ("constant eps=4", MaterialModel::constant(4.0)),
        (
            "two-oscillator dielectric",
            MaterialModel::lorentz(
                0.0,
                vec![
                    OscillatorTerm::new(1.1, 2.0e16, 0.0),
                    OscillatorTerm::new(0.8, 5.0e14, 5.0e13),
                ],
            ),
        ),
        ("drude metal", MaterialModel::drude(1.37e16, 5.3e13)),
        (
            "magnetic dielectric (mu=2)",
            MaterialModel::single_oscillator(2.0, 1e16, 0.0).with_permeability(2.0),
        ),
    ];

    let temperature = 300.0;
    let ns = [1usize, 10, 100, 1000];
    print!("{:<28}", "material");
    for n in ns {
        print!("  eps(xi_{n:<4})");
    }
    println!("  mu");
    for (name, m) in &materials {
        m.validate()?;
        print!("{name:<28}");
        for n in ns {
            let xi = matsubara_frequency(n, temperature);
            print!("  {:>11.6}", m.eval_permittivity(xi)?);
        }
        println!("  {}", m.eval_permeability(0.0));
    }
    println!(
        "static limit of the drude metal: {:?}",
        materials[3].1.static_permittivity()
    );
    Ok(())
}
