use std::collections::{BTreeSet, HashMap};

use super::label::{KnotLabel, PrimeKnot, PrimeTable, Summand, SymmetryType, Variant};
use crate::error::{Error, Result};

/// Labels listed per summand when counting knot types. Negative amphichiral
/// knots are listed as `K`, `K^m` and `K^r`; the last two are the same knot
/// type but tables of composite counts traditionally list both.
fn listed_labels(s: SymmetryType) -> usize {
    match s {
        SymmetryType::NegAmphichiral => 3,
        other => other.variants().len(),
    }
}

fn orbit_count<T: Ord>(items: impl IntoIterator<Item = T>, image: impl Fn(&T, Variant) -> T) -> usize {
    let items: BTreeSet<T> = items.into_iter().collect();
    let reps: BTreeSet<T> = items
        .iter()
        .map(|x| {
            Variant::ALL
                .iter()
                .map(|&g| image(x, g))
                .min()
                .expect("four images")
        })
        .collect();
    reps.len()
}

/// Number of knot types and of possibly distinct ropelength values for a sum
/// of two primes with the given symmetry types.
///
/// With `related_by_symmetry` the summands are variants of the same prime
/// (as in the granny and square knots), so the sum is a multiset.
pub fn compose_symmetry(a: SymmetryType, b: SymmetryType, related_by_symmetry: bool) -> (usize, usize) {
    let act = |s: SymmetryType, v: Variant, g: Variant| s.canonical(v.compose(g));
    if related_by_symmetry && a == b {
        let n = listed_labels(a);
        let pairs = a.variants().iter().flat_map(|&x| {
            a.variants()
                .iter()
                .filter(move |&&y| y >= x)
                .map(move |&y| (x, y))
        });
        let classes = orbit_count(pairs, |&(x, y), g| {
            let (u, v) = (act(a, x, g), act(a, y, g));
            (u.min(v), u.max(v))
        });
        (n * (n + 1) / 2, classes)
    } else {
        let pairs = a
            .variants()
            .iter()
            .flat_map(|&x| b.variants().iter().map(move |&y| (x, y)));
        let classes = orbit_count(pairs, |&(x, y), g| (act(a, x, g), act(b, y, g)));
        (listed_labels(a) * listed_labels(b), classes)
    }
}

/// Every composite knot type with at least two prime summands and total
/// crossing number at most `max_crossings`, sorted by crossing number and
/// then by label.
pub fn enumerate_composites(table: &PrimeTable, max_crossings: u32) -> Result<Vec<KnotLabel>> {
    const SMALLEST_PRIME: u32 = 3;
    let budget = max_crossings.saturating_sub(SMALLEST_PRIME);
    if let Some(&(c, i)) = table
        .missing_symmetry()
        .iter()
        .find(|&&(c, _)| c <= budget)
    {
        return Err(Error::MissingSymmetry(format!("{c}_{i}")));
    }
    let pieces: Vec<Summand> = table
        .primes()
        .iter()
        .filter(|p| p.crossings <= budget)
        .flat_map(|&p: &PrimeKnot| p.symmetry.variants().iter().map(move |&v| Summand::new(p, v)))
        .collect();

    let mut out = Vec::new();
    let mut stack = Vec::new();
    extend(&pieces, 0, max_crossings, &mut stack, &mut out);
    out.sort_by(|x: &KnotLabel, y: &KnotLabel| {
        x.crossings().cmp(&y.crossings()).then_with(|| x.cmp(y))
    });
    Ok(out)
}

fn extend(
    pieces: &[Summand],
    from: usize,
    budget: u32,
    stack: &mut Vec<Summand>,
    out: &mut Vec<KnotLabel>,
) {
    for (i, &s) in pieces.iter().enumerate().skip(from) {
        if s.prime.crossings > budget {
            continue;
        }
        stack.push(s);
        if stack.len() >= 2 {
            out.push(KnotLabel::new(stack.clone()));
        }
        extend(pieces, i, budget - s.prime.crossings, stack, out);
        stack.pop();
    }
}

/// Groups labels whose knot types differ by a global mirror or reversal and
/// so share a minimal ropelength. Groups appear in order of first member.
pub fn ropelength_classes(labels: &[KnotLabel]) -> Vec<Vec<KnotLabel>> {
    let mut index: HashMap<KnotLabel, usize> = HashMap::new();
    let mut groups: Vec<Vec<KnotLabel>> = Vec::new();
    for l in labels {
        let key = l.class_representative();
        let slot = *index.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        if !groups[slot].contains(l) {
            groups[slot].push(l.clone());
        }
    }
    groups
}
