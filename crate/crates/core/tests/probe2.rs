//! Scratch probe for the circumcenter convergence failure. Delete me.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coxdev::fixtures::genus2_chart;
use coxdev::model_metric::ModelPoint;
use coxdev::npc_analysis::circumcenter;
use coxdev::sampling::random_point_set;

#[test]
fn probe2() {
    let chart = genus2_chart();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for trial in 0..50 {
        let n = rng.gen_range(3..=10);
        let set = random_point_set(&chart, &mut rng, n).unwrap();
        match circumcenter(&chart, &set) {
            Ok(data) => {
                eprintln!(
                    "trial {trial} (n = {n}): ok radius {:.6} spread {:.3e} iters {}",
                    data.radius, data.seed_spread, data.iterations
                );
            }
            Err(e) => {
                eprintln!("trial {trial} (n = {n}): ERR {e:?}");
                for (i, p) in set.points().iter().enumerate() {
                    eprintln!("  point {i}: {:?}", ModelPoint::of(&chart, p).unwrap());
                }
                break;
            }
        }
    }
}
