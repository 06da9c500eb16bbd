#![allow(dead_code)]

use std::sync::Arc;

use grover_lab::dense::DenseTensor;
use grover_lab::{CustomBox, Diagram, FunctionBox, Generator, GroupSpec, SpaceLabel};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_WIRE_DIMENSION: usize = 64;

pub struct Palette {
    pub s: SpaceLabel,
    pub t: SpaceLabel,
    pub z2: Arc<GroupSpec>,
}

impl Palette {
    pub fn new() -> Self {
        Self {
            s: SpaceLabel::set("S", 2).unwrap(),
            t: SpaceLabel::set("T", 3).unwrap(),
            z2: Arc::new(GroupSpec::cyclic(2).unwrap()),
        }
    }

    pub fn spaces(&self) -> Vec<SpaceLabel> {
        vec![self.s.clone(), self.t.clone(), self.z2.space()]
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn product(spaces: &[SpaceLabel]) -> usize {
    spaces.iter().map(SpaceLabel::dimension).product()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseTensor {
    let entries = (0..rows * cols).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    DenseTensor::from_entries(rows, cols, entries).unwrap()
}

fn random_function(rng: &mut ChaCha8Rng, from: &SpaceLabel, to: &SpaceLabel) -> FunctionBox {
    let table = (0..from.dimension()).map(|_| rng.gen_range(0..to.dimension())).collect();
    FunctionBox::new(from.clone(), to.clone(), table).unwrap()
}

/// A state generator with no inputs.
fn random_state(rng: &mut ChaCha8Rng, p: &Palette) -> Generator {
    let space = p.spaces().choose(rng).unwrap().clone();
    match rng.gen_range(0..4) {
        0 => Generator::Unit(space),
        1 if space == p.z2.space() => Generator::GroupUnit(p.z2.clone()),
        _ => Generator::Point { element: rng.gen_range(0..space.dimension()), space },
    }
}

/// One generator consuming `wires[0]` (and maybe `wires[1]`); returns it with
/// the number of wires consumed.
fn random_consumer(rng: &mut ChaCha8Rng, p: &Palette, wires: &[SpaceLabel]) -> (Generator, usize) {
    let w = wires[0].clone();
    let pair = wires.get(1).filter(|next| **next == w).is_some();
    loop {
        let g = match rng.gen_range(0..12) {
            0 | 1 => Generator::Identity(w.clone()),
            2 => Generator::Counit(w.clone()),
            3 => Generator::PointEffect { element: rng.gen_range(0..w.dimension()), space: w.clone() },
            4 | 5 => Generator::Comult(w.clone()),
            6 => {
                let to = p.spaces().choose(rng).unwrap().clone();
                Generator::FunctionBox(random_function(rng, &w, &to))
            }
            7 if pair => return (Generator::Mult(w), 2),
            8 if w == p.z2.space() => Generator::RepBox { group: p.z2.clone(), irrep: rng.gen_range(0..2), dimension: 1 },
            9 if pair && w == p.z2.space() => return (Generator::GroupMult(p.z2.clone()), 2),
            10 => {
                let m = random_matrix(rng, w.dimension(), w.dimension());
                Generator::CustomBox(CustomBox::new("p", vec![w.clone()], vec![w.clone()], m).unwrap())
            }
            11 if wires.len() > 1 => return (Generator::Swap(w, wires[1].clone()), 2),
            _ => continue,
        };
        return (g, 1);
    }
}

/// A random well-typed diagram from `inputs` with `depth` slices whose wire
/// bundles stay within [`MAX_WIRE_DIMENSION`].
pub fn random_diagram(rng: &mut ChaCha8Rng, p: &Palette, inputs: &[SpaceLabel], depth: usize) -> Diagram {
    let mut wires = inputs.to_vec();
    let mut slices = Vec::new();
    for _ in 0..depth {
        let mut chosen = None;
        for _ in 0..20 {
            let mut slice = Vec::new();
            let mut i = 0;
            while i < wires.len() {
                if rng.gen_bool(0.15) {
                    slice.push(random_state(rng, p));
                }
                let (g, used) = random_consumer(rng, p, &wires[i..]);
                slice.push(g);
                i += used;
            }
            if wires.is_empty() || rng.gen_bool(0.2) {
                slice.push(random_state(rng, p));
            }
            let outputs: Vec<SpaceLabel> = slice.iter().flat_map(Generator::outputs).collect();
            if product(&outputs) <= MAX_WIRE_DIMENSION {
                chosen = Some((slice, outputs));
                break;
            }
        }
        let Some((slice, outputs)) = chosen else { break };
        slices.push(slice);
        wires = outputs;
    }
    let d = Diagram::from_slices(inputs.to_vec(), wires, slices);
    assert!(d.validate().is_ok(), "generator produced an ill-typed diagram");
    d
}

/// A random list of input wires within the dimension bound.
pub fn random_wires(rng: &mut ChaCha8Rng, p: &Palette, max: usize) -> Vec<SpaceLabel> {
    let mut wires = Vec::new();
    for _ in 0..rng.gen_range(0..=max) {
        let w = p.spaces().choose(rng).unwrap().clone();
        if product(&wires) * w.dimension() <= MAX_WIRE_DIMENSION {
            wires.push(w);
        }
    }
    wires
}
