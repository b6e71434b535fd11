//! Class-group 2^k-rank toolkit for quadratic fields Q(sqrt(+-n)) and the
//! biquadratic fields K_n = Q(sqrt(n), sqrt(-n)) attached to odd squarefree
//! n.
//!
//! Two independent routes are built for every quantity: closed-form
//! genus-theory/Redei/Pell formulas on the one hand, and a binary quadratic
//! form class-group oracle (reduction, composition, cycle enumeration,
//! Smith-normal-form structure) on the other. The `scan`, `density` and
//! `verify` layers run both routes over ranges of n and cross-check them,
//! ending in the 2-adic class-number identity
//!   v2(h(n)) + v2(h(-n)) + log2 Q(n) - 1 = rk2(Cl(K_n)) + rk4(Cl(K_n)).

pub mod arith;
pub mod biquad;
pub mod classgroup;
pub mod density;
pub mod error;
pub mod forms;
pub mod gaussian;
pub mod pell;
pub mod quadratic;
pub mod scan;
pub mod snf;
pub mod verify;

pub use arith::{factor_odd_squarefree, kronecker, sieve_odd_squarefree, two_squares,
                FactoredOddSquarefree, Sieve};
pub use biquad::{check_final_identity, count_f, delta, epsilon, rk2_biquad, rk4_biquad,
                 rk4_bounds, BiquadInvariants, CheckReport};
pub use classgroup::{AbelianGroupStructure, Oracle, DEFAULT_ORACLE_BOUND};
pub use error::{Error, Result};
pub use forms::{compose, QuadForm};
pub use gaussian::{gaussian_divisors, GaussianInteger};
pub use pell::{cf_sqrt, hasse_q, hasse_witness, in_e, norm_fundamental_unit, solve_pm2,
               EWitness, PellData};
pub use quadratic::{fundamental_discriminants, hypothesis_ordinary, in_n, index_i,
                    redei_matrix, rk2_narrow, rk2_ordinary, rk2_sum, rk4_narrow,
                    QuadInvariants, RedeiMatrix, Sign};
