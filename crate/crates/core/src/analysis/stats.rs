//! Empirical error frequencies, mean squares and equidistribution.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::sweep::{sweep, Evaluation, Step};
use super::AnalysisError;
use crate::partition::frame::{with_frame, Frame, TripleCursor};
use crate::partition::{DensityTriple, Label};
use crate::qfield::{lin, Coeff, Rational};

/// Counts of the values -1, 0, +1 over `total` observations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Freq {
    pub minus: u64,
    pub zero: u64,
    pub plus: u64,
}

impl Freq {
    fn add(&mut self, v: i8) {
        match v {
            -1 => self.minus += 1,
            0 => self.zero += 1,
            1 => self.plus += 1,
            _ => panic!("error value {v} outside {{-1, 0, 1}}"),
        }
    }

    fn merge(self, o: Freq) -> Freq {
        Freq { minus: self.minus + o.minus, zero: self.zero + o.zero, plus: self.plus + o.plus }
    }

    pub fn total(&self) -> u64 {
        self.minus + self.zero + self.plus
    }

    /// Exact relative frequency of `v`; zero when nothing was observed.
    pub fn ratio(&self, v: i8) -> Rational {
        let c = match v {
            -1 => self.minus,
            0 => self.zero,
            1 => self.plus,
            _ => 0,
        };
        if self.total() == 0 {
            return Rational::zero();
        }
        Rational::new(BigInt::from(c), BigInt::from(self.total()))
    }

    pub fn freq(&self, v: i8) -> f64 {
        self.ratio(v).to_f64().unwrap_or(f64::NAN)
    }
}

/// Closed-form limits the empirical values should approach.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theory {
    /// `P(E_beta = +1) = P(E_beta = -1) = alpha*beta/2`
    pub e_beta_pm: f64,
    /// `P(E_gamma = +1) = P(E_gamma = -1) = 1/8 - alpha*beta/2`
    pub e_gamma_pm: f64,
    /// `P(E_gamma = 0) = 3/4 + alpha*beta`
    pub e_gamma_zero: f64,
    /// share of B ranks perturbed by +1 (and by -1): `alpha/2`
    pub b_pm: f64,
    /// share of C ranks perturbed by +1 (and by -1): `(1/8 - alpha*beta/2)/gamma`
    pub c_pm: f64,
    /// mean of `E_beta^2`: `alpha*beta`
    pub d_beta: f64,
    /// mean of `E_gamma^2`: `1/4 - alpha*beta`
    pub d_gamma: f64,
    pub omega: f64,
    pub omega_small: f64,
}

impl Theory {
    pub fn for_triple(t: &DensityTriple) -> Theory {
        let (a, b, g) = (t.alpha().to_f64(), t.beta().to_f64(), t.gamma().to_f64());
        let ab = a * b;
        Theory {
            e_beta_pm: ab / 2.0,
            e_gamma_pm: 0.125 - ab / 2.0,
            e_gamma_zero: 0.75 + ab,
            b_pm: a / 2.0,
            c_pm: (0.125 - ab / 2.0) / g,
            d_beta: ab,
            d_gamma: 0.25 - ab,
            omega: 0.25,
            omega_small: 0.25,
        }
    }
}

/// Mean-square aggregates over `n <= N`, kept as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanSquares {
    /// `(1/N) * sum E_beta(n)^2`
    pub d_beta_hat: Rational,
    /// `(1/N) * sum E_gamma(n)^2`
    pub d_gamma_hat: Rational,
    /// `d_beta_hat + d_gamma_hat`
    pub omega_hat: Rational,
    /// `(1/N) * (sum (b(n) - b_tilde(n))^2 + sum (c(n) - c_tilde(n))^2)`
    /// over ranks whose terms are `<= N`; estimates
    /// `beta*d_beta + gamma*d_gamma`
    pub omega_small_hat: Rational,
    /// share of `m <= N` lying in `W_beta` but not the B part, or in
    /// `W_gamma` but not the C part; this is not `omega_small_hat`, since
    /// a run of shifted ranks only leaves its endpoints outside the part
    pub misplaced_hat: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub n: u64,
    pub e_beta: Freq,
    pub e_gamma: Freq,
    /// over ranks whose B term is `<= N`
    pub b_perturb: Freq,
    /// over ranks whose C term is `<= N`
    pub c_perturb: Freq,
    pub mean_squares: MeanSquares,
    pub theory: Theory,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    e_beta: Freq,
    e_gamma: Freq,
    b_perturb: Freq,
    c_perturb: Freq,
    misplaced: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            e_beta: self.e_beta.merge(o.e_beta),
            e_gamma: self.e_gamma.merge(o.e_gamma),
            b_perturb: self.b_perturb.merge(o.b_perturb),
            c_perturb: self.c_perturb.merge(o.c_perturb),
            misplaced: self.misplaced + o.misplaced,
        }
    }
}

fn tally_in<T: Coeff>(f: &Frame<T>, big_n: u64, eval: Evaluation) -> Tally {
    sweep(
        f,
        1,
        big_n,
        eval,
        |_| Tally::default(),
        |t, s: &Step| {
            let r = &s.region;
            t.e_beta.add(r.e_beta());
            t.e_gamma.add(r.e_gamma());
            if r.in_w_beta() {
                // m = b(n) for some rank n; the table gives b(n) - b_tilde(n)
                t.b_perturb.add(r.b_table().expect("every W_beta index has a table row"));
            }
            let label = r.label();
            if label == Label::C {
                t.c_perturb.add(r.c_table().expect("every C index has a table row"));
            }
            if (r.in_w_beta() && label != Label::B) || (r.in_w_gamma() && label != Label::C) {
                t.misplaced += 1;
            }
        },
        Tally::merge,
    )
}

fn over_n(x: u64, n: u64) -> Rational {
    Rational::new(BigInt::from(x), BigInt::from(n))
}

/// Frequencies of every error value over `1..=N` together with their
/// closed-form targets. The targets assume `1, alpha, beta` are linearly
/// independent over the rationals.
pub fn empirical_error_densities(t: &DensityTriple, big_n: u64, eval: Evaluation) -> DensityReport {
    assert!(big_n >= 1, "N must be positive");
    let tally = with_frame!(&t.frame, f => tally_in(f, big_n, eval));
    let d_beta_hat = over_n(tally.e_beta.plus + tally.e_beta.minus, big_n);
    let d_gamma_hat = over_n(tally.e_gamma.plus + tally.e_gamma.minus, big_n);
    DensityReport {
        n: big_n,
        e_beta: tally.e_beta,
        e_gamma: tally.e_gamma,
        b_perturb: tally.b_perturb,
        c_perturb: tally.c_perturb,
        mean_squares: MeanSquares {
            omega_hat: &d_beta_hat + &d_gamma_hat,
            d_beta_hat,
            d_gamma_hat,
            omega_small_hat: over_n(
                tally.b_perturb.plus + tally.b_perturb.minus + tally.c_perturb.plus + tally.c_perturb.minus,
                big_n,
            ),
            misplaced_hat: over_n(tally.misplaced, big_n),
        },
        theory: Theory::for_triple(t),
    }
}

pub fn mean_square_errors(t: &DensityTriple, big_n: u64) -> MeanSquares {
    empirical_error_densities(t, big_n, Evaluation::Incremental).mean_squares
}

/// Grid size of [`discrepancy`] along each axis.
pub const GRID: u64 = 100;

/// Largest deviation `|#{n <= N : u_n < i/100, v_n < j/100} / N - ij/10^4|`
/// over the `100 x 100` grid of anchored boxes.
///
/// Refuses triples where `1, alpha, beta` are rationally dependent, since
/// `(u_n, v_n)` is then not equidistributed in the square.
pub fn discrepancy(t: &DensityTriple, big_n: u64) -> Result<f64, AnalysisError> {
    if !t.is_independent() {
        return Err(AnalysisError::NotIndependent);
    }
    assert!(big_n >= 1, "N must be positive");
    let cells = with_frame!(&t.frame, f => grid_counts(f, big_n));
    // prefix sums: pre[i][j] = #points with floor(100u) < i and floor(100v) < j
    let g = GRID as usize;
    let mut pre = vec![vec![0u64; g + 1]; g + 1];
    for i in 0..g {
        for j in 0..g {
            pre[i + 1][j + 1] = cells[i * g + j] + pre[i][j + 1] + pre[i + 1][j] - pre[i][j];
        }
    }
    let scale = GRID * GRID;
    let mut worst = 0u64; // |count * 10^4 - N * i * j|, in units of 1/(N*10^4)
    for (i, row) in pre.iter().enumerate().skip(1) {
        for (j, &count) in row.iter().enumerate().skip(1) {
            let rhs = big_n * (i * j) as u64;
            worst = worst.max((count * scale).abs_diff(rhs));
        }
    }
    Ok(worst as f64 / (big_n as f64 * scale as f64))
}

fn grid_counts<T: Coeff>(f: &Frame<T>, big_n: u64) -> Vec<u64> {
    let g = GRID as usize;
    let hundred = T::from_u64(GRID).expect("small");
    let two_den = f.la.two_den();
    let bucket = |num: &[T; 3]| f.basis.floor_div(&lin::scale(num, &hundred), &two_den).to_usize().expect("bucket");
    let mut cells = vec![0u64; g * g];
    let mut cur = TripleCursor::new(f, 1);
    loop {
        cells[bucket(&cur.ca.frac) * g + bucket(&cur.cb.frac)] += 1;
        if cur.m() == big_n {
            break;
        }
        cur.step(f);
    }
    cells
}
