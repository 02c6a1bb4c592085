#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stbc_core::{AlgElem, AlgebraSpec, FieldElem, Rational, TowerSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(r: &mut ChaCha8Rng) -> Rational {
    Rational::new(r.random_range(-6..=6), r.random_range(1..=3))
}

pub fn elem(t: &TowerSpec, r: &mut ChaCha8Rng) -> FieldElem {
    t.elem((0..t.dim()).map(|_| small(r)).collect()).unwrap()
}

pub fn base_elem(t: &TowerSpec, r: &mut ChaCha8Rng) -> FieldElem {
    let coords: Vec<Rational> = (0..t.base_dim()).map(|_| small(r)).collect();
    t.from_base(&coords).unwrap()
}

pub fn alg_elem(a: &AlgebraSpec, r: &mut ChaCha8Rng) -> AlgElem {
    let t = a.tower();
    a.elem(elem(t, r), elem(t, r)).unwrap()
}

pub fn nonzero_alg_elem(a: &AlgebraSpec, r: &mut ChaCha8Rng) -> AlgElem {
    loop {
        let x = alg_elem(a, r);
        if !x.is_zero() {
            return x;
        }
    }
}
