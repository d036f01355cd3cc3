use crate::exact::IndexedSequence;
use crate::sequences::variation_split;

use super::{lsc_to_machine, FunctionError, PolygonSequence, StreamTransformer};

/// `u(s) = y(s) - z(s)` where `y`, `z` are the lower semi-computable machines
/// of `g` and `h`. On a name of `x`,
/// `sum |u(s+1) - u(s)| <= g(x) + h(x) - y(0) - z(0)`.
pub fn wc_from_difference(
    g: &PolygonSequence,
    h: &PolygonSequence,
) -> Result<StreamTransformer, FunctionError> {
    let my = lsc_to_machine(g)?;
    let mz = lsc_to_machine(h)?;
    let (uy, uz) = (my.clone(), mz.clone());
    Ok(StreamTransformer::from_fns(
        move |n| uy.usage(n).max(uz.usage(n)),
        move |p, n| {
            let y = my.step(p, n);
            let z = mz.step(p, n);
            y.into_iter().zip(z).map(|(a, b)| a - b).collect()
        },
    ))
}

/// Splits a machine with weakly effective outputs `u` into two machines with
/// increasing outputs
/// `y(s) = u(0) + sum_{i<=s} (u(i+1) ∸ u(i))` and `z(s) = sum_{i<=s} (u(i) ∸ u(i+1))`,
/// so that `y(s) - z(s) = u(s+1)`. Output `s` needs `u(s+1)`, so both read
/// what `m` reads for one more output.
pub fn wc_machine_to_difference(m: &StreamTransformer) -> (StreamTransformer, StreamTransformer) {
    let half = |rising: bool| {
        let (mu, ms) = (m.clone(), m.clone());
        StreamTransformer::from_fns(
            move |n| mu.usage(n + 1),
            move |p, n| {
                let u = IndexedSequence::literal(ms.step(p, n + 1));
                let (y, z) = variation_split(&u);
                if rising {
                    y.prefix(n)
                } else {
                    z.prefix(n)
                }
            },
        )
    };
    (half(true), half(false))
}
