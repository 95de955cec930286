"""Zero-knowledge proof of assets: Groth16 over BN254, Pedersen aggregation, batch tooling."""

__version__ = "0.1.0"
