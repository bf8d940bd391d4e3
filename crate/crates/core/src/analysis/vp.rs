use crate::izhikevich::SpikeTrain;
use crate::Scalar;

/// Victor–Purpura spike-time distance with shift cost `q` per ms.
///
/// Minimum total cost of turning `a` into `b` by deleting or inserting
/// spikes (cost 1 each) and shifting spikes (cost `q |Δt|`), computed by
/// the `O(|a| |b|)` dynamic program.
pub fn vp_distance<T: Scalar>(a: &[T], b: &[T], q: T) -> T {
    if a.is_empty() {
        return T::of_usize(b.len());
    }
    if b.is_empty() {
        return T::of_usize(a.len());
    }
    let mut prev: Vec<T> = (0..=b.len()).map(T::of_usize).collect();
    let mut cur = vec![T::zero(); b.len() + 1];
    for (i, &ta) in a.iter().enumerate() {
        cur[0] = T::of_usize(i + 1);
        for (j, &tb) in b.iter().enumerate() {
            let delete = prev[j + 1] + T::one();
            let insert = cur[j] + T::one();
            let shift = prev[j] + q * (ta - tb).abs();
            cur[j + 1] = delete.min(insert).min(shift);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn vp_trains<T: Scalar>(a: &SpikeTrain<T>, b: &SpikeTrain<T>, q: T) -> T {
    vp_distance(a.times(), b.times(), q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_identities() {
        assert_eq!(vp_distance(&[1.0f64, 5.0, 9.0], &[1.0, 5.0, 9.0], 0.7), 0.0);
        assert_eq!(vp_distance::<f64>(&[], &[1.0, 2.0, 3.0], 0.1), 3.0);
        assert_eq!(vp_distance::<f64>(&[1.0, 2.0], &[], 0.1), 2.0);
        assert_eq!(vp_distance::<f64>(&[], &[], 0.1), 0.0);
    }

    #[test]
    fn singletons() {
        for &(t1, t2, q) in &[(1.0f64, 4.0, 0.1), (1.0, 40.0, 0.1), (3.0, 3.5, 2.0), (0.0, 100.0, 0.0)] {
            let want = (q * (t1 - t2).abs()).min(2.0);
            assert!((vp_distance(&[t1], &[t2], q) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_cost_counts_difference() {
        assert_eq!(vp_distance(&[1.0f64, 2.0, 3.0, 4.0], &[50.0], 0.0), 3.0);
    }

    #[test]
    fn large_cost_disjoint_trains() {
        let a = [1.0f64, 2.0, 3.0];
        let b = [10.0f64, 20.0];
        assert_eq!(vp_distance(&a, &b, 1e6), 5.0);
    }
}
