"""How certificate length and entry size grow with n for random SL_n(Z) elements."""
import argparse
import statistics
import sys
from dataclasses import dataclass

from kazhdan.factor import factor_full, log_levels, random_sl, verify_certificate


@dataclass
class GrowthConfig:
    n_min: int = 3
    n_max: int = 16
    samples: int = 20
    word_length: int = 40
    seed: int = 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    cfg = GrowthConfig()
    for name, default in vars(cfg).items():
        ap.add_argument(f"--{name.replace('_', '-')}", dest=name, type=type(default), default=default)
    cfg = GrowthConfig(**vars(ap.parse_args()))
    print("n,levels,mean_generalized,max_generalized,mean_base,max_entry_bits,all_verified")
    for n in range(cfg.n_min, cfg.n_max + 1):
        gen, base, bits, ok = [], [], 0, True
        for s in range(cfg.samples):
            g = random_sl(n, cfg.word_length, cfg.seed * 100_000 + n * 1000 + s)
            cert = factor_full(g)
            ok &= verify_certificate(cert, g)
            gen.append(cert.generalized_count)
            base.append(cert.base_count)
            bits = max(bits, cert.max_bits)
        print(f"{n},{log_levels(n)},{statistics.mean(gen):.2f},{max(gen)},{statistics.mean(base):.2f},{bits},{ok}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
