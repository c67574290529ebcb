"""Fixed loci of order-6 non-symplectic automorphisms of K3 surfaces."""

__version__ = "0.1.0"
