//! Exact computations with generalized Onsager algebras.
//!
//! The generalized Onsager algebra `L(A)` of a symmetrizable generalized
//! Cartan matrix `A` is presented by generators `B_i` and inhomogeneous Serre
//! relations. This crate builds those relations, evaluates words in them
//! inside the fix-point subalgebra of the Chevalley involution (finite type in
//! a Chevalley basis, untwisted affine type in the loop realization), and
//! checks the resulting identities with exact rational arithmetic.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod affine_loop;
pub mod cartan;
pub mod characters;
pub mod chevalley;
pub mod exact_math;
pub mod freelie;
pub mod onsager;
pub mod roots;
pub mod serre_coeffs;
pub mod verify;
