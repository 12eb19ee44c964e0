use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;

const ATOMS: [&str; 3] = ["a", "b", "c"];

fn catalan(n: usize) -> Vec<u128> {
    let mut c = vec![1u128; n + 1];
    for k in 1..=n {
        c[k] = (0..k).map(|i| c[i] * c[k - 1 - i]).sum();
    }
    c
}

/// Uniform binary tree with `leaves` leaves.
fn shape(rng: &mut ChaCha8Rng, leaves: usize, cat: &[u128]) -> Formula {
    if leaves == 1 {
        return Formula::atom(ATOMS[rng.gen_range(0..ATOMS.len())]);
    }
    // a tree with n internal nodes splits its n - 1 others as (i, n - 1 - i)
    let n = leaves - 1;
    let mut pick = rng.gen_range(0..cat[n]);
    let mut i = 0;
    while pick >= cat[i] * cat[n - 1 - i] {
        pick -= cat[i] * cat[n - 1 - i];
        i += 1;
    }
    let a = shape(rng, i + 1, cat);
    let b = shape(rng, n - i, cat);
    Formula::imp(a, b)
}

/// `count` formulas over atoms a, b, c whose canonical rendering has at
/// most `n` symbols. The number of atoms is drawn uniformly, then a tree
/// shape uniformly among those with that many leaves; formulas over the
/// bound are redrawn.
pub fn gen_random_formulas(n: usize, count: usize, seed: u64) -> Vec<Formula> {
    let n = n.max(1);
    let max_leaves = n.div_ceil(2);
    let cat = catalan(max_leaves);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let leaves = rng.gen_range(1..=max_leaves);
        let f = shape(&mut rng, leaves, &cat);
        if f.symbol_count() <= n {
            out.push(f);
        }
    }
    out
}
