"""Command-line front end: complete, segment, and metrics subcommands."""

import argparse
import sys

import numpy as np

from . import data_io, segmentation, solver
from .errors import DivergenceError, ImageFormatError, ParameterDomainError, RankfillError
from .image_core import reshape_bands, split_bands
from .metrics import psnr, ssim

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_IO = 3
EXIT_DIVERGED = 4


def _solver_flags(p):
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--t", type=float, default=1e-6)
    p.add_argument("--t2", type=float, default=0.5)
    p.add_argument("--rho1", type=float, default=2.5)
    p.add_argument("--rho2", type=float, default=None)
    p.add_argument("--tau1", type=float, default=2.5)
    p.add_argument("--tau2", type=float, default=2.5)
    p.add_argument("--tau3", type=float, default=1.0001)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--trace", help="write per-iteration CSV here")
    p.add_argument("--reference", help="clean image for PSNR/SSIM reporting")
    p.add_argument("--psnr-literal", action="store_true",
                   help="report the unnormalized PSNR variant")


def build_parser():
    parser = argparse.ArgumentParser(prog="rankfill")
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("complete", help="recover missing pixels")
    comp.add_argument("--input", required=True)
    comp.add_argument("--output", required=True)
    group = comp.add_mutually_exclusive_group(required=True)
    group.add_argument("--sr", type=float, help="sampling rate for a generated mask")
    group.add_argument("--mask", help="path to a saved mask file")
    comp.add_argument("--seed", type=int, default=0)
    _solver_flags(comp)

    seg = sub.add_parser("segment", help="denoise then cluster into regions")
    seg.add_argument("--input", required=True)
    seg.add_argument("--output", required=True)
    seg.add_argument("--k", type=int, required=True)
    seg.add_argument("--noise-level", type=float, default=0.0,
                     help="mean of the injected Gaussian noise (variance 0.01)")
    seg.add_argument("--palette", help="comma-separated intensities, ascending clusters")
    seg.add_argument("--seed", type=int, default=0)
    _solver_flags(seg)

    met = sub.add_parser("metrics", help="PSNR/SSIM between two images")
    met.add_argument("--reference", required=True)
    met.add_argument("--test", required=True)
    met.add_argument("--psnr-literal", action="store_true")
    return parser


def _load_stage(path, stage):
    try:
        return data_io.load_image(path)
    except (OSError, ImageFormatError) as exc:
        raise _StageFailure(stage, EXIT_IO, str(exc)) from exc


class _StageFailure(Exception):
    def __init__(self, stage, code, message):
        self.stage = stage
        self.code = code
        super().__init__(message)


def _flatten(im):
    """PPM stacks are solved as one band-concatenated matrix."""
    if im.ndim == 3:
        return reshape_bands(im), im.shape[0]
    return im, None


def _unflatten(flat, n_bands):
    return split_bands(flat, n_bands) if n_bands else flat


def _params(args, profile, noise_level=0.0):
    kwargs = dict(t=args.t, t2=args.t2, rho1=args.rho1, tau1=args.tau1,
                  tau2=args.tau2, tau3=args.tau3, tol=args.tol, max_iter=args.max_iter)
    if args.a is not None:
        kwargs["a"] = args.a
    if args.rho2 is not None:
        kwargs["rho2"] = args.rho2
    try:
        if profile == "complete":
            return solver.completion_defaults(**kwargs)
        return solver.segmentation_defaults(noise_level=noise_level, **kwargs)
    except ParameterDomainError as exc:
        raise _StageFailure("params", EXIT_PARAMS, str(exc)) from exc


def _report(args, result, clean, trace=None):
    parts = []
    if trace is not None:
        parts.append(f"status={trace.status}")
        parts.append(f"iters={len(trace)}")
    if clean is not None:
        parts.append(f"psnr={psnr(clean, result, literal=args.psnr_literal):.4f}")
        if clean.ndim == 2:
            parts.append(f"ssim={ssim(clean, result):.4f}")
    print(" ".join(parts))


def cmd_complete(args):
    im = _load_stage(args.input, "load")
    flat, n_bands = _flatten(im)
    if args.mask:
        try:
            mask = data_io.load_mask(args.mask)
        except (OSError, ImageFormatError) as exc:
            raise _StageFailure("load", EXIT_IO, str(exc)) from exc
    else:
        try:
            mask = data_io.make_mask(flat.shape[0], flat.shape[1], args.sr, args.seed)
        except ValueError as exc:
            raise _StageFailure("params", EXIT_PARAMS, str(exc)) from exc
    try:
        b = data_io.apply_mask(flat, mask)
    except RankfillError as exc:
        raise _StageFailure("mask", EXIT_PARAMS, str(exc)) from exc

    params = _params(args, "complete")
    reference = None
    if args.reference:
        ref_im = _load_stage(args.reference, "load")
        reference, _ = _flatten(ref_im)
    try:
        recovered, trace = solver.run(b, params, reference=reference,
                                      observed=mask.observed)
    except DivergenceError as exc:
        raise _StageFailure("solve", EXIT_DIVERGED, str(exc)) from exc

    try:
        data_io.save_image(args.output, _unflatten(recovered, n_bands))
        if args.trace:
            data_io.export_trace(trace, args.trace)
    except OSError as exc:
        raise _StageFailure("save", EXIT_IO, str(exc)) from exc
    _report(args, recovered, reference if reference is not None else flat, trace)
    return EXIT_OK


def cmd_segment(args):
    im = _load_stage(args.input, "load")
    flat, n_bands = _flatten(im)
    if args.noise_level > 0:
        spec = segmentation.NoiseSpec(mean=args.noise_level, seed=args.seed)
        noisy = segmentation.add_gaussian_noise(flat, spec)
    else:
        noisy = flat
    params = _params(args, "segment", noise_level=args.noise_level)

    reference = flat
    if args.reference:
        ref_im = _load_stage(args.reference, "load")
        reference, _ = _flatten(ref_im)
    try:
        smoothed, trace = solver.run(noisy, params, reference=reference)
    except DivergenceError as exc:
        raise _StageFailure("solve", EXIT_DIVERGED, str(exc)) from exc

    palette = None
    if args.palette:
        palette = [float(x) for x in args.palette.split(",")]
    try:
        segmented = segmentation.segment_image(smoothed, args.k, seed=args.seed,
                                               palette=palette)
    except (RankfillError, ValueError) as exc:
        raise _StageFailure("cluster", EXIT_PARAMS, str(exc)) from exc

    try:
        data_io.save_image(args.output, _unflatten(segmented, n_bands))
        if args.trace:
            data_io.export_trace(trace, args.trace)
    except OSError as exc:
        raise _StageFailure("save", EXIT_IO, str(exc)) from exc
    _report(args, segmented, reference, trace)
    return EXIT_OK


def cmd_metrics(args):
    ref = _load_stage(args.reference, "load")
    test = _load_stage(args.test, "load")
    ref_flat, _ = _flatten(ref)
    test_flat, _ = _flatten(test)
    try:
        p = psnr(ref_flat, test_flat, literal=args.psnr_literal)
        s = ssim(ref_flat, test_flat)
    except RankfillError as exc:
        raise _StageFailure("metrics", EXIT_PARAMS, str(exc)) from exc
    print(f"psnr={p:.4f} ssim={s:.4f}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"complete": cmd_complete, "segment": cmd_segment, "metrics": cmd_metrics}
    try:
        return handlers[args.command](args)
    except _StageFailure as exc:
        print(f"error: stage={exc.stage}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
