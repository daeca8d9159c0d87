"""Command-line interface: train, tag, evaluate, compare."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .dataio import CorpusFormat, TagMap, load_tagmap, read_corpus
from .discrim import SgdConfig
from .errors import DataError, InvalidInputError, NumericalDegeneracyError
from .evaluation import evaluate, format_kv, format_table
from .features import FeatureTemplate
from .modelfile import load_model, save_model
from .tagger import DecoderKind, train_tagger, train_compare_pair

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

DATA_DIR_ENV = "EFBTAG_DATA_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve(path: str) -> Path:
    p = Path(path)
    if not p.is_absolute() and not p.exists():
        base = os.environ.get(DATA_DIR_ENV)
        if base and (Path(base) / p).exists():
            return Path(base) / p
    return p


def _add_corpus_flags(sub):
    sub.add_argument(
        "--format",
        choices=[f.value for f in CorpusFormat],
        required=True,
        help="corpus file layout",
    )
    sub.add_argument("--tagmap", help="two-column tag mapping file")


def _add_train_flags(sub):
    sub.add_argument(
        "--decoder",
        choices=[k.value for k in DecoderKind],
        default=DecoderKind.HMC_EFB.value,
    )
    sub.add_argument(
        "--features",
        choices=[t.value for t in FeatureTemplate],
        default=FeatureTemplate.LF1.value,
    )
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--epochs", type=int, default=20)
    sub.add_argument("--lr", type=float, default=0.1)
    sub.add_argument("--decay", type=float, default=0.05)
    sub.add_argument("--l2", type=float, default=1e-5)
    sub.add_argument("--batch", type=int, default=32)
    sub.add_argument("--delta", type=float, default=1e-6, help="count smoothing")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="efbtag", description="HMC / EFB / MEMM sequence tagger")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_train = subs.add_parser("train", help="train a decoder on a labeled corpus")
    p_train.add_argument("train_path", help="training corpus file")
    _add_corpus_flags(p_train)
    _add_train_flags(p_train)
    p_train.add_argument("--out", required=True, help="model file to write")

    p_tag = subs.add_parser("tag", help="label plain-text sentences")
    p_tag.add_argument("model_path")
    p_tag.add_argument(
        "input", nargs="?", default="-", help="one sentence per line; '-' for stdin"
    )
    p_tag.add_argument("--out", default="-", help="output file; '-' for stdout")

    p_eval = subs.add_parser("evaluate", help="score a model on a labeled corpus")
    p_eval.add_argument("model_path")
    p_eval.add_argument("test_path")
    _add_corpus_flags(p_eval)

    p_cmp = subs.add_parser(
        "compare", help="train and score hmc-efb vs memm on shared features"
    )
    p_cmp.add_argument("train_path")
    p_cmp.add_argument("test_path")
    _add_corpus_flags(p_cmp)
    p_cmp.add_argument(
        "--features",
        nargs="+",
        choices=[t.value for t in FeatureTemplate],
        default=[FeatureTemplate.LF1.value],
    )
    p_cmp.add_argument("--seed", type=int, default=42)
    p_cmp.add_argument("--epochs", type=int, default=20)
    p_cmp.add_argument("--lr", type=float, default=0.1)
    p_cmp.add_argument("--decay", type=float, default=0.05)
    p_cmp.add_argument("--l2", type=float, default=1e-5)
    p_cmp.add_argument("--batch", type=int, default=32)
    p_cmp.add_argument("--delta", type=float, default=1e-6)
    return parser


def _load_tagmap(arg: Optional[str]) -> Optional[TagMap]:
    return load_tagmap(_resolve(arg)) if arg else None


def _sgd_config(args) -> SgdConfig:
    return SgdConfig(
        learning_rate=args.lr,
        decay=args.decay,
        epochs=args.epochs,
        l2=args.l2,
        batch_size=args.batch,
        seed=args.seed,
    )


def cmd_train(args) -> int:
    corpus = read_corpus(
        _resolve(args.train_path), CorpusFormat(args.format), _load_tagmap(args.tagmap)
    )
    tagger, summary = train_tagger(
        corpus,
        DecoderKind(args.decoder),
        FeatureTemplate(args.features),
        _sgd_config(args),
        smoothing=args.delta,
    )
    save_model(args.out, tagger)
    print(f"sentences={summary.n_sentences}")
    print(f"tokens={summary.n_tokens}")
    print(f"labels={summary.n_labels}")
    print(f"vocab={summary.vocab_size}")
    print(f"feature_index={summary.feature_index_size}")
    print(f"final_loss={summary.final_loss:.6f}")
    print(f"model={args.out}")
    return EXIT_OK


def cmd_tag(args) -> int:
    tagger = load_model(_resolve(args.model_path))
    src = sys.stdin if args.input == "-" else open(_resolve(args.input), encoding="utf-8")
    dst = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8")
    try:
        first = True
        for line in src:
            tokens = line.split()
            if not tokens:
                continue
            labels = tagger.decode(tokens)
            if not first:
                dst.write("\n")
            for tok, lab in zip(tokens, labels):
                dst.write(f"{tok}\t{tagger.tagset.label_of(lab)}\n")
            first = False
    finally:
        if src is not sys.stdin:
            src.close()
        if dst is not sys.stdout:
            dst.close()
    return EXIT_OK


def cmd_evaluate(args) -> int:
    tagger = load_model(_resolve(args.model_path))
    test = read_corpus(
        _resolve(args.test_path),
        CorpusFormat(args.format),
        _load_tagmap(args.tagmap),
        tagset=tagger.tagset,
    )
    report = evaluate(tagger, test, tagger.vocab)
    print(format_table(report))
    print()
    print(
        format_kv(
            report,
            dataset=str(args.test_path),
            decoder=tagger.kind.value,
            template=tagger.template.value if tagger.template else "none",
        )
    )
    return EXIT_OK


def cmd_compare(args) -> int:
    fmt = CorpusFormat(args.format)
    tagmap = _load_tagmap(args.tagmap)
    train_corpus = read_corpus(_resolve(args.train_path), fmt, tagmap)
    test = read_corpus(
        _resolve(args.test_path), fmt, tagmap, tagset=train_corpus.tagset
    )
    sgd = _sgd_config(args)
    for template_name in args.features:
        template = FeatureTemplate(template_name)
        efb_tagger, memm_tagger = train_compare_pair(
            train_corpus, template, sgd, smoothing=args.delta
        )
        for name, tagger in (("memm", memm_tagger), ("hmc-efb", efb_tagger)):
            report = evaluate(tagger, test, train_corpus.vocab)
            print(
                f"{template.value:<5} {name:<8} "
                f"{report.kw_rate:6.2f}% / {report.uw_rate:6.2f}% / "
                f"{report.global_rate:6.2f}%"
            )
            print(
                format_kv(
                    report,
                    dataset=str(args.test_path),
                    decoder=name,
                    template=template.value,
                )
            )
            print()
    return EXIT_OK


_COMMANDS = {
    "train": cmd_train,
    "tag": cmd_tag,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InvalidInputError as exc:
        print(f"efbtag: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"efbtag: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalDegeneracyError as exc:
        print(f"efbtag: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
