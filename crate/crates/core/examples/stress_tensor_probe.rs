//! The averaged stress in a vacuum probe gap between two half-stacks, and
//! the gap-closure term that turns it into the pressure on a layer.

use lifshitz::kernel::{gap_closure_derivative, stress_tensor_avg, work_to_close_gap};
use lifshitz::pressure::pressure_in_layer;
use lifshitz::{
    Layer, LayerRef, MaterialModel, MatsubaraSpec, ProbeGeometry, QuadratureSpec, Stack,
};

fn main() -> lifshitz::Result<()> {
    let silica = MaterialModel::single_oscillator(1.1, 2.0e16, 0.0);
    let water = MaterialModel::single_oscillator(0.8, 1.9e16, 0.0);
    let stack = Stack::new(
        silica.clone(),
        vec![Layer::new(water, 10e-9), Layer::new(silica.clone(), 4e-9)],
        MaterialModel::vacuum(),
    );
    let mats = MatsubaraSpec::at(300.0);
    let quad = QuadratureSpec::default();

    // probe between layer 1 and layer 2
    let base = ProbeGeometry::split(&stack, 1, 1e-9)?;
    println!("probe stress, which blows up like z_v^-3 as the probe closes:");
    for z_v in [1e-8, 3e-9, 1e-9, 3e-10, 1e-10] {
        let t = stress_tensor_avg(&base.with_gap(z_v), &mats, &quad)?;
        let w = work_to_close_gap(&base, z_v, &mats, &quad)?;
        println!(
            "  z_v = {z_v:.1e} m  T_avg = {:+.6e} Pa  work = {:+.6e} J/m^2",
            t.value, w.value
        );
    }

    // Layer 2 of the full stack is layer 1 of the part right of the probe
    // (seen from vacuum), corrected by the work of closing the probe.
    let fixed = mats.with_fixed_terms(pressure_in_layer(&stack, 2, &mats, &quad)?.n_used);
    let right_part = Stack::new(
        MaterialModel::vacuum(),
        stack.layers[1..].to_vec(),
        stack.right.clone(),
    );
    let p_vr = pressure_in_layer(&right_part, 1, &fixed, &quad)?;
    let closed = ProbeGeometry::split(&stack, 1, 0.0)?;
    let g = gap_closure_derivative(&closed, LayerRef::right(1), &fixed, &quad)?;
    let direct = pressure_in_layer(&stack, 2, &fixed, &quad)?;
    println!("layer 2 with vacuum on its left  {:+.12e} Pa", p_vr.value);
    println!("gap-closure term                 {:+.12e} Pa", g.value);
    println!(
        "sum                              {:+.12e} Pa",
        p_vr.value + g.value
    );
    println!("layer 2 of the full stack        {:+.12e} Pa", direct.value);
    Ok(())
}
