//! Quadrature rules on [0, 1]: Gauss-Legendre and the generalized Gauss
//! rules for the weight -ln(x).

use std::sync::OnceLock;

/// Nodes and weights on [0, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

pub const MAX_GAUSS_ORDER: usize = 64;

fn legendre_rule(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    Rule { nodes, weights }
}

/// n-point Gauss-Legendre rule on [0, 1], 1 <= n <= 64.
pub fn gauss_legendre(n: usize) -> &'static Rule {
    static RULES: OnceLock<Vec<Rule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| (1..=MAX_GAUSS_ORDER).map(legendre_rule).collect());
    &rules[n.clamp(1, MAX_GAUSS_ORDER) - 1]
}

#[rustfmt::skip]
const LOG8_NODES: [f64; 8] = [
    0.013320244160892465012, 0.07975042901389493841, 0.19787102932618805379, 0.35415399435190941967,
    0.52945857523491727771, 0.70181452993909996384, 0.84937932044110667605, 0.95332645005635978877,
];
#[rustfmt::skip]
const LOG8_WEIGHTS: [f64; 8] = [
    0.16441660472800288683, 0.2375256100233060205, 0.22684198443191912637, 0.17575407900607024499,
    0.11292403024675905186, 0.057872210717782072399, 0.020979073742132978043, 0.0036864071040276190134,
];
#[rustfmt::skip]
const LOG16_NODES: [f64; 16] = [
    0.0038978344871159159241, 0.02302894561687323982, 0.058280398306240412348, 0.10867836509105403649,
    0.17260945490984393776, 0.24793705447057849515, 0.33209454912991715598, 0.42218391058194860012,
    0.51508247338146260348, 0.60755612044772872409, 0.69637565322821406116, 0.7784325658732654052,
    0.85085026971539108323, 0.91108685722227190542, 0.95702557170354215759, 0.98704780024798447676,
];
#[rustfmt::skip]
const LOG16_WEIGHTS: [f64; 16] = [
    0.060791710043591232851, 0.10291567751758214439, 0.12235566204600919356, 0.12756924693701598872,
    0.12301357460007091542, 0.11184724485548572262, 0.096596385152124341253, 0.079356664351473138782,
    0.061850494581965207095, 0.045435246507726668629, 0.031098974751581806409, 0.019459765927360842078,
    0.010776254963205525646, 0.0049725428900876417125, 0.001678201110051194515, 0.00028235376466843632178,
];

/// Rule with ∫_0^1 -ln(x) f(x) dx ≈ Σ w_i f(x_i), exact for polynomials of
/// degree < 2n. Available for n = 8 and n = 16.
pub fn log_gauss(n: usize) -> &'static Rule {
    static RULES: OnceLock<[Rule; 2]> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        [
            Rule {
                nodes: LOG8_NODES.to_vec(),
                weights: LOG8_WEIGHTS.to_vec(),
            },
            Rule {
                nodes: LOG16_NODES.to_vec(),
                weights: LOG16_WEIGHTS.to_vec(),
            },
        ]
    });
    if n <= 8 {
        &rules[0]
    } else {
        &rules[1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_is_exact_to_degree_2n_minus_1() {
        for n in [1, 2, 3, 8, 17, 64] {
            let r = gauss_legendre(n);
            for p in 0..2 * n {
                let s: f64 = r.iter().map(|(x, w)| w * x.powi(p as i32)).sum();
                assert!((s - 1.0 / (p as f64 + 1.0)).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn log_rules_integrate_moments() {
        // ∫_0^1 -ln(x) x^p dx = 1/(p+1)^2
        for n in [8, 16] {
            let r = log_gauss(n);
            for p in 0..2 * n {
                let s: f64 = r.iter().map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = 1.0 / ((p + 1) as f64).powi(2);
                assert!((s - exact).abs() < 1e-14 * exact.max(1.0), "n={n} p={p}");
            }
        }
    }
}
