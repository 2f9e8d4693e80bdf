//! Pressure in every layer of a coated-substrate stack.

use lifshitz::pressure::pressure_in_layer;
use lifshitz::{Layer, MaterialModel, MatsubaraSpec, QuadratureSpec, Stack};

fn main() -> lifshitz::Result<()> {
    let silicon =
        MaterialModel::lorentz(0.0, vec![lifshitz::OscillatorTerm::new(10.7, 6.6e15, 0.0)]);
    let oxide = MaterialModel::single_oscillator(1.1, 2.0e16, 0.0);
    let water = MaterialModel::single_oscillator(0.8, 1.9e16, 0.0);
    let gold = MaterialModel::drude(1.37e16, 5.3e13);

    let stack = Stack::new(
        silicon,
        vec![
            Layer::new(oxide.clone(), 2e-9),
            Layer::new(water, 15e-9),
            Layer::new(oxide, 2e-9),
            Layer::new(MaterialModel::vacuum(), 30e-9),
        ],
        gold,
    );
    stack.validate()?;
    let mats = MatsubaraSpec::at(295.0);
    let quad = QuadratureSpec::default();
    let names = ["oxide", "water", "oxide", "vacuum"];
    for (r, name) in (1..=stack.layers.len()).zip(names) {
        let p = pressure_in_layer(&stack, r, &mats, &quad)?;
        println!(
            "layer {r} ({name:<6}, {:>5.1} nm): {:+.8e} Pa  [{} terms]",
            stack.layers[r - 1].thickness * 1e9,
            p.value,
            p.n_used
        );
    }
    Ok(())
}
