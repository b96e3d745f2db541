use super::{Signature, Term};

/// All terms over `sig` with at most `max_size` nodes, duplicate-free and
/// sorted by the term order (size first, then head name, then arguments).
pub fn enumerate_terms(sig: &Signature, max_size: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    for n in 1..=max_size {
        let mut bucket = Vec::new();
        for sym in sig.symbols() {
            if sym.arity == 0 {
                if n == 1 {
                    bucket.push(Term::constant(sym.name.as_str()));
                }
                continue;
            }
            if n < 1 + sym.arity {
                continue;
            }
            let mut args = Vec::with_capacity(sym.arity);
            fill(&by_size, sym.arity, n - 1, &mut args, &mut |args| {
                bucket.push(Term::app(sym.name.as_str(), args.to_vec()));
            });
        }
        bucket.sort();
        by_size[n] = bucket;
    }
    by_size.into_iter().flatten().collect()
}

/// Calls `emit` for every argument vector of length `remaining_args + args.len()`
/// whose remaining sizes sum to `budget`.
fn fill(
    by_size: &[Vec<Term>],
    remaining_args: usize,
    budget: usize,
    args: &mut Vec<Term>,
    emit: &mut dyn FnMut(&[Term]),
) {
    if remaining_args == 0 {
        if budget == 0 {
            emit(args);
        }
        return;
    }
    // each remaining argument needs at least one node
    let max_here = budget.saturating_sub(remaining_args - 1);
    for size in 1..=max_here {
        for t in &by_size[size] {
            args.push(t.clone());
            fill(by_size, remaining_args - 1, budget - size, args, emit);
            args.pop();
        }
    }
}
