//! Pressure on a film between two half-spaces, with the special cases and
//! the free-energy route side by side.

use lifshitz::pressure::{free_energy_lr, pressure_lr, pressure_lr_dlp, pressure_lv, pressure_vv};
use lifshitz::{MaterialModel, MatsubaraSpec, QuadratureSpec};

fn main() -> lifshitz::Result<()> {
    let gold = MaterialModel::drude(1.37e16, 5.3e13);
    let polystyrene = MaterialModel::single_oscillator(1.5, 1.4e16, 0.0);
    let glass = MaterialModel::single_oscillator(1.3, 2.0e16, 0.0);
    let vac = MaterialModel::vacuum();
    let mats = MatsubaraSpec::at(300.0);
    let quad = QuadratureSpec::default();

    println!(
        "{:>10}  {:>14}  {:>14}  {:>14}  {:>14}",
        "z (nm)", "p_VV", "p_LV", "p_LR", "p_LR (q form)"
    );
    for z_nm in [1.0, 3.0, 10.0, 30.0, 100.0] {
        let z = z_nm * 1e-9;
        let vv = pressure_vv(&polystyrene, z, &mats, &quad)?;
        let lv = pressure_lv(&glass, &polystyrene, z, &mats, &quad)?;
        let lr = pressure_lr(&glass, &polystyrene, &gold, z, &mats, &quad)?;
        let dlp = pressure_lr_dlp(&glass, &polystyrene, &gold, z, &mats, &quad)?;
        println!(
            "{z_nm:>10.1}  {:>+14.6e}  {:>+14.6e}  {:>+14.6e}  {:>+14.6e}",
            vv.value, lv.value, lr.value, dlp.value
        );
    }

    // vacuum gap between two gold plates, and the energy derivative
    let z = 20e-9;
    let p = pressure_lr(&gold, &vac, &gold, z, &mats, &quad)?;
    let h = 1e-4 * z;
    let fixed = mats.with_fixed_terms(p.n_used);
    let e_plus = free_energy_lr(&gold, &vac, &gold, z + h, &fixed, &quad)?;
    let e_minus = free_energy_lr(&gold, &vac, &gold, z - h, &fixed, &quad)?;
    println!();
    println!("gold | 20 nm vacuum | gold");
    println!(
        "  pressure          {:+.10e} Pa (positive = attraction)",
        p.value
    );
    println!(
        "  dU/dz             {:+.10e} Pa",
        (e_plus.value - e_minus.value) / (2.0 * h)
    );
    println!("  matsubara terms   {}", p.n_used);
    println!("  truncation error  {:.2e} Pa", p.truncation_error);
    println!("  quadrature error  {:.2e} Pa", p.quadrature_error);
    Ok(())
}
