use std::collections::BTreeMap;

use super::EvalError;
use crate::multilabel::LabelSet;

/// Cohen's kappa from a square agreement table (`table[i][j]`: coder 1 said
/// category i, coder 2 said j).
///
/// When chance agreement is exactly 1 the statistic is undefined; it is
/// taken as 1.0 if observed agreement is also perfect, an error otherwise.
/// (With integer counts p_e = 1 forces p_o = 1, so the error is a guard.)
pub fn cohen_kappa(table: &[Vec<u64>]) -> Result<f64, EvalError> {
    let k = table.len();
    let n: u64 = table.iter().flatten().sum();
    if n == 0 {
        return Err(EvalError::Empty);
    }
    let agree: u64 = (0..k).map(|i| table[i][i]).sum();
    let rows: Vec<u64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<u64> = (0..k).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let chance: u128 = rows.iter().zip(&cols).map(|(&r, &c)| r as u128 * c as u128).sum();
    let n2 = n as u128 * n as u128;
    let p_o = agree as f64 / n as f64;
    if chance == n2 {
        return if agree == n {
            Ok(1.0)
        } else {
            Err(EvalError::DegenerateMarginals(p_o))
        };
    }
    let p_e = chance as f64 / n2 as f64;
    Ok((p_o - p_e) / (1.0 - p_e))
}

fn check_lengths(a: &[LabelSet], b: &[LabelSet]) -> Result<(), EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(())
}

/// Kappa over all (record, label) inclusion decisions pooled into one 2x2
/// table.
pub fn kappa_label_level(coder1: &[LabelSet], coder2: &[LabelSet], n_labels: usize) -> Result<f64, EvalError> {
    check_lengths(coder1, coder2)?;
    if n_labels == 0 {
        return Err(EvalError::EmptyLabelSpace);
    }
    let mut t = vec![vec![0u64; 2]; 2];
    for (a, b) in coder1.iter().zip(coder2) {
        for l in 0..n_labels {
            t[usize::from(!a.contains(l))][usize::from(!b.contains(l))] += 1;
        }
    }
    cohen_kappa(&t)
}

/// Kappa with each distinct label set as one category.
pub fn kappa_answer_level(coder1: &[LabelSet], coder2: &[LabelSet]) -> Result<f64, EvalError> {
    check_lengths(coder1, coder2)?;
    let mut categories: BTreeMap<&LabelSet, usize> = BTreeMap::new();
    for s in coder1.iter().chain(coder2) {
        let next = categories.len();
        categories.entry(s).or_insert(next);
    }
    let k = categories.len();
    let mut t = vec![vec![0u64; k]; k];
    for (a, b) in coder1.iter().zip(coder2) {
        t[categories[a]][categories[b]] += 1;
    }
    cohen_kappa(&t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_two_by_two() {
        let k = cohen_kappa(&[vec![40, 5], vec![5, 50]]).unwrap();
        // p_o = 0.9, p_e = 0.505
        assert!((k - 0.395 / 0.495).abs() < 1e-12);
        assert!((k - 0.798).abs() < 1e-3);
    }

    #[test]
    fn label_level_identity_and_complement() {
        let c1 = vec![
            LabelSet::from([0]),
            LabelSet::from([1]),
            LabelSet::from([0, 1]),
            LabelSet::new(),
        ];
        assert_eq!(kappa_label_level(&c1, &c1, 2).unwrap(), 1.0);
        let complement: Vec<LabelSet> = c1
            .iter()
            .map(|s| (0..2).filter(|l| !s.contains(*l)).collect())
            .collect();
        assert!((kappa_label_level(&c1, &complement, 2).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn answer_level_simple_cases() {
        let a = LabelSet::from([0]);
        let b = LabelSet::from([1]);
        let c1 = vec![a.clone(), b.clone(), a.clone(), b.clone()];
        assert_eq!(kappa_answer_level(&c1, &c1).unwrap(), 1.0);
        let c2 = vec![b.clone(), a.clone(), b, a];
        assert!((kappa_answer_level(&c1, &c2).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn answer_level_three_categories() {
        // confusion table [[4,1,0],[0,3,1],[1,0,0]] over {0}, {1}, {0,1}
        let (a, b, ab) = (LabelSet::from([0]), LabelSet::from([1]), LabelSet::from([0, 1]));
        let pairs = [(&a, &a, 4), (&a, &b, 1), (&b, &b, 3), (&b, &ab, 1), (&ab, &a, 1)];
        let (mut c1, mut c2) = (Vec::new(), Vec::new());
        for (x, y, n) in pairs {
            for _ in 0..n {
                c1.push(x.clone());
                c2.push(y.clone());
            }
        }
        // p_o = 0.7, p_e = 0.42
        assert!((kappa_answer_level(&c1, &c2).unwrap() - 14.0 / 29.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_marginals() {
        let same = vec![LabelSet::from([0]); 3];
        assert_eq!(kappa_answer_level(&same, &same).unwrap(), 1.0);
        assert_eq!(kappa_label_level(&same, &same, 1).unwrap(), 1.0);
        assert_eq!(
            kappa_label_level(&same, &same[..2], 1),
            Err(EvalError::LengthMismatch(3, 2))
        );
    }
}
