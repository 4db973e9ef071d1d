//! Whitening a correlated sample before moment estimation.
use moment_sentinel::moments::{estimate_moments, Whitener};
use moment_sentinel::multiindex::MultiIndex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> moment_sentinel::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z = Normal::new(0.0, 1.0).unwrap();
    let data: Vec<Vec<f64>> = (0..2000)
        .map(|_| {
            let (a, b) = (z.sample(&mut rng), z.sample(&mut rng));
            vec![3.0 + 2.0 * a, -1.0 + 1.5 * a + 0.5 * b]
        })
        .collect();

    let w = Whitener::fit(&data)?;
    println!("mean {:?}", w.mean());
    println!("transform {:?}", w.transform());

    let white = w.whiten_all(&data)?;
    let g = estimate_moments(&white, 2)?;
    for e in [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2]] {
        let a = MultiIndex::new(e.to_vec());
        println!("γ_{a} = {:+.6}", g.get(&a).unwrap());
    }
    let back = w.unwhiten(&white[0])?;
    println!("round trip of the first point: {:?} -> {:?}", data[0], back);
    Ok(())
}
