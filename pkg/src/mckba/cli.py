"""Command-line front end.

Exit codes: 0 success, 1 unexpected library error, 2 usage error, otherwise
the ``exit_code`` of the raised error class (see ``mckba.errors``):
3 parse, 4 block width, 5 empty image, 6 length mismatch, 7 dimensions,
8 invalid key, 9 unresolvable bit, 10 ambiguous key usage, 11 corrupt
equivalent key, 12 undecidable hypothesis, 13 degenerate state,
14 insufficient data.
"""
import argparse
import os
import sys
import time

import numpy as np

from . import analysis, attack, bitcodec, chaos, cipher, keyrecovery
from .errors import BadDimensions, InvalidKey, LengthMismatch, MCKBAError
from .formats import AttackTranscript, chunk_hex, format_key, read_key, to_hex, write_key
from .imageio import parse_dims, read_image, write_image

CHOSEN_NAMES = [f"chosen_{k}.pgm" for k in range(4)]


def _raw(args):
    return parse_dims(args.raw) if getattr(args, "raw", None) else None


def _load_key(path):
    key = read_key(path)
    problems = cipher.validate_key(key)
    if problems:
        raise InvalidKey(f"{path}: " + "; ".join(problems))
    return key


def _load_chosen(directory, n):
    seqs, shape = [], None
    for name in CHOSEN_NAMES:
        img = read_image(os.path.join(directory, name))
        if shape is not None and img.shape != shape:
            raise LengthMismatch(f"{name} is {img.shape}, expected {shape}")
        shape = img.shape
        seqs.append(bitcodec.image_to_elements(img, n))
    return seqs, shape


def _parameters(n, shape, elements):
    return {"n": n, "width": int(shape[1]), "height": int(shape[0]), "elements": elements}


def _chosen_section(n):
    # one period of the pixel pattern spans lcm(8, n) bits
    per_period = int(np.lcm(8, n)) // n
    out = []
    for name, seq in zip(CHOSEN_NAMES, attack.chosen_plain_sequences(n, per_period)):
        pixels = np.packbits(bitcodec.elements_to_bits(seq), bitorder="little")
        out.append({"name": name, "value": to_hex(seq.elements[0], n),
                    "pixel_period": pixels.tolist()})
    return out


def _key_section(key):
    return {"n": key.n, "key1": to_hex(key.key1, key.n), "key2": to_hex(key.key2, key.n),
            "x0_raw": key.x0, "canonical": key.canonical}


def _evidence(h, n, selected):
    return {"key1": to_hex(h.key1, n), "key2": to_hex(h.key2, n),
            "selected": selected,
            "checks": [{"pair": k, "mu_estimate": r.estimate, "bound": r.bound, "m": r.m,
                        "consistent": r.consistent} for k, r in h.evidence]}


def cmd_keygen(args):
    key = cipher.keygen(args.n, args.seed)
    if args.out:
        write_key(args.out, key)
    else:
        sys.stdout.write(format_key(key))
    return 0


def _crypt(args, fn):
    key = _load_key(args.key)
    raw = _raw(args)
    img = read_image(args.input, raw)
    write_image(args.output, fn(img, key), raw=raw is not None)
    return 0


def cmd_encrypt(args):
    return _crypt(args, cipher.encrypt_image)


def cmd_decrypt(args):
    return _crypt(args, cipher.decrypt_image)


def cmd_gen_chosen(args):
    n, w, h = args.n, args.width, args.height
    bitcodec.check_block_width(n)
    if w <= 0 or h <= 0 or (8 * w * h) % n:
        raise BadDimensions(f"8*{w}*{h} bits is not a multiple of n={n}")
    os.makedirs(args.outdir, exist_ok=True)
    for name, seq in zip(CHOSEN_NAMES, attack.chosen_plain_sequences(n, 8 * w * h // n)):
        write_image(os.path.join(args.outdir, name), bitcodec.elements_to_image(seq, w, h))
    return 0


def _attack_core(args, timings):
    n = args.n
    t0 = time.perf_counter()
    plains, shape = _load_chosen(args.chosen, n)
    ciphers, cshape = _load_chosen(args.ciphers, n)
    if cshape != shape:
        raise LengthMismatch(f"cipher images are {cshape}, plain images {shape}")
    timings["load"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    ek = attack.recover_equivalent_key(plains, ciphers)
    timings["equivalent_key"] = time.perf_counter() - t0
    transcript = AttackTranscript(
        parameters=_parameters(n, shape, len(ek)),
        chosen_plaintexts=_chosen_section(n),
        addends=chunk_hex(ek.addends.tolist(), n),
        masks=chunk_hex(ek.masks.tolist(), n))
    return plains, ciphers, ek, transcript


def _finish(args, transcript, timings):
    if args.timings:
        transcript.timings = {k: round(v, 6) for k, v in timings.items()}
    if args.transcript:
        transcript.save(args.transcript)


def cmd_attack(args):
    timings = {}
    _, _, ek, transcript = _attack_core(args, timings)
    target = read_image(args.target, _raw(args))
    seq = bitcodec.image_to_elements(target, args.n)
    t0 = time.perf_counter()
    plain = attack.equivalent_decrypt(seq, ek)
    timings["decrypt"] = time.perf_counter() - t0
    write_image(args.output, bitcodec.elements_to_image(plain, target.shape[1], target.shape[0]),
                raw=args.raw is not None)
    _finish(args, transcript, timings)
    return 0


def cmd_recover_key(args):
    timings = {}
    plains, ciphers, ek, transcript = _attack_core(args, timings)
    t0 = time.perf_counter()
    try:
        ka, kb = keyrecovery.distinct_addends(ek)
        transcript.distinct_addends = [to_hex(ka, args.n), to_hex(kb, args.n)]
        h1, h2 = keyrecovery.derive_control_hypotheses(ek, ciphers[1], ka, kb)
        try:
            chosen, rejected = keyrecovery.select_hypothesis(h1, h2, args.pairs)
        except MCKBAError:
            transcript.hypotheses = [_evidence(h, args.n, False) for h in (h1, h2)]
            raise
    except MCKBAError:
        _finish(args, transcript, timings)
        raise
    timings["key_recovery"] = time.perf_counter() - t0
    key = cipher.SecretKey(args.n, chosen.key1, chosen.key2, chosen.states[0], canonical=True)
    transcript.hypotheses = [_evidence(h1, args.n, h1 is chosen), _evidence(h2, args.n, h2 is chosen)]
    transcript.recovered_key = _key_section(key)
    _finish(args, transcript, timings)
    write_key(args.out, key)
    return 0


def cmd_analyze(args):
    key = _load_key(args.key)
    img = read_image(args.image, _raw(args))
    seq = bitcodec.image_to_elements(img, key.n)
    codes = chaos.control_sequence(key.x0, len(seq))
    rows = []
    if args.plain_bit:
        i, m = args.plain_bit
        rep = analysis.plaintext_diffusion(key, codes, seq, i, m)
        print(f"plaintext bit ({i}, {m}) flipped: {rep.count} cipher bits changed")
        for e, j in rep.changed_bits:
            print(f"  element {e:>8}  bit {j:>2}")
        rows.append({"kind": "plaintext_diffusion", "element": i, "bit": m,
                     "changed": [list(p) for p in rep.changed_bits]})
    if args.key_bit:
        which, t = args.key_bit[0], int(args.key_bit[1])
        rep = analysis.key_diffusion(key, codes, seq, which, t)
        print(f"{which} bit {t} flipped: {rep.total} cipher bits changed over {len(seq)} elements")
        print("  changed/element  count")
        for k, v in rep.histogram.items():
            print(f"  {k:>15}  {v}")
        rows.append({"kind": "key_diffusion", "which": which, "bit": t,
                     "histogram": {str(k): v for k, v in rep.histogram.items()}})
    if args.monobit:
        st = analysis.monobit_stats(codes)
        print(f"PRBS monobit: {st.bits} bits, ones fraction {st.ones_fraction:.6f}, "
              f"chi-square {st.chi_square:.3f}, z {st.z_score:.3f}")
        rows.append({"kind": "monobit", "bits": st.bits, "ones": st.ones,
                     "ones_fraction": st.ones_fraction, "chi_square": st.chi_square})
    if args.transcript:
        AttackTranscript(parameters=_parameters(key.n, img.shape, len(seq)),
                         analysis=rows).save(args.transcript)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="mckba", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a random valid secret key")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="key file (stdout if omitted)")
    p.set_defaults(func=cmd_keygen)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = sub.add_parser(name, help=f"{name} an image")
        p.add_argument("--key", required=True)
        p.add_argument("--raw", metavar="WxH", help="headerless 8-bit input/output")
        p.add_argument("input")
        p.add_argument("output")
        p.set_defaults(func=func)

    p = sub.add_parser("gen-chosen", help="write the four chosen plain-images")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("outdir")
    p.set_defaults(func=cmd_gen_chosen)

    def attack_args(p):
        p.add_argument("--n", type=int, default=32)
        p.add_argument("--chosen", required=True, help="directory with chosen_0..3.pgm")
        p.add_argument("--ciphers", required=True, help="directory with their encryptions")
        p.add_argument("--transcript")
        p.add_argument("--timings", action="store_true",
                       help="record wall-clock timings (makes transcripts non-reproducible)")

    p = sub.add_parser("attack", help="decrypt a cipher-image with the equivalent key")
    attack_args(p)
    p.add_argument("--raw", metavar="WxH", help="target/output are headerless")
    p.add_argument("target")
    p.add_argument("output")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("recover-key", help="recover key1, key2 and x0")
    attack_args(p)
    p.add_argument("--pairs", type=int, default=keyrecovery.DEFAULT_PAIRS,
                   help="consecutive state pairs checked per hypothesis")
    p.add_argument("--out", required=True, help="key file to write")
    p.set_defaults(func=cmd_recover_key)

    p = sub.add_parser("analyze", help="diffusion and PRBS balance reports")
    p.add_argument("--key", required=True)
    p.add_argument("--raw", metavar="WxH")
    p.add_argument("--plain-bit", nargs=2, type=int, metavar=("ELEMENT", "BIT"))
    p.add_argument("--key-bit", nargs=2, metavar=("key1|key2", "BIT"))
    p.add_argument("--monobit", action="store_true")
    p.add_argument("--transcript")
    p.add_argument("image")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MCKBAError as exc:
        print(f"mckba: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, IndexError, ValueError) as exc:
        print(f"mckba: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
