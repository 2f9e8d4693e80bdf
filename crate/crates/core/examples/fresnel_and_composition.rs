//! Single-interface and generalized reflection coefficients, and the
//! zero-thickness composition rule.

use lifshitz::em_core::{composition, fresnel, generalized_reflection};
use lifshitz::{Layer, MaterialModel, Polarization, ReflectionSide};

fn main() -> lifshitz::Result<()> {
    let xi = 2.5e15;
    let krho = 3.0e7;
    let water = MaterialModel::single_oscillator(0.8, 1.9e16, 0.0);
    let glass = MaterialModel::single_oscillator(1.3, 2.0e16, 0.0);
    let gold = MaterialModel::drude(1.37e16, 5.3e13);
    let vac = MaterialModel::vacuum();

    for pol in Polarization::BOTH {
        let direct = fresnel(pol, xi, krho, &water, &gold);
        let via_vacuum = composition(
            fresnel(pol, xi, krho, &water, &vac),
            fresnel(pol, xi, krho, &vac, &gold),
        )?;
        println!(
            "{pol:?}: R(water->gold) = {direct:+.15}  via zero-width vacuum = {via_vacuum:+.15}  antisymmetry R_ab + R_ba = {:+.1e}",
            direct + fresnel(pol, xi, krho, &gold, &water)
        );
    }

    // water looking through a 5 nm glass coating onto gold
    for t in [0.0, 1e-9, 5e-9, 50e-9, 1e-6] {
        let side = if t == 0.0 {
            ReflectionSide::interface(water.clone(), gold.clone())
        } else {
            ReflectionSide::new(
                water.clone(),
                vec![Layer::new(glass.clone(), t)],
                gold.clone(),
            )
        };
        side.validate()?;
        let r = generalized_reflection(Polarization::H, xi, krho, &side);
        println!("coating {t:>8.1e} m: generalized h reflection {r:+.12}");
    }
    println!(
        "thick-coating limit (glass->gold): {:+.12}",
        fresnel(Polarization::H, xi, krho, &water, &glass)
    );
    Ok(())
}
