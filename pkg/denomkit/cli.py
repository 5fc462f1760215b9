"""
Linha de comando do denomkit.

Saída de dados vai para stdout em ordem canônica; logs vão para stderr.
Códigos de saída: 0 sucesso, 1 divergência em verificação, 2 erro de uso.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Optional, Sequence

from denomkit import database
from denomkit.config import configure_logging, get_settings, override_settings
from denomkit.exceptions import DenomkitError
from denomkit.services.affmod import classical_decomposition, format_weight, fundamental_module, module_dump, relation_report
from denomkit.services.arquiver import ARQuiver, build_ar_quiver, render
from denomkit.services.cartan import (
    AFFINE_TAGS,
    build_root_system,
    finite_cartan,
    normalize_affine_tag,
    parse_word,
    sigma_coxeter_word,
    standard_automorphism,
    twisted_longest_word,
)
from denomkit.services.denomlab import (
    SUITES,
    applicable_suites,
    default_assignment,
    denom_lookup,
    dorey_query,
    gamma_j,
    parse_param,
    verify_tables,
)
from denomkit.services.rmatrix import compute_denominator, eigensystem_dump, r_eigensystem, rnorm_entry_on_pair
from denomkit.services.statistics import StatisticsTable, distance_polynomial
from denomkit.services.words import QuiverOrientation, class_of_orientation, commutation_class

logger = logging.getLogger(__name__)


class UsageError(DenomkitError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse sem sys.exit: erros viram UsageError (código 2)"""

    def error(self, message):
        raise UsageError(message)


def _is_affine(tag: str) -> bool:
    return any(mark in tag for mark in ('~', '^', '('))


def _class_options(p: argparse.ArgumentParser) -> None:
    p.add_argument('--type', required=True, help="tipo finito (E6, D4, ...) ou afim (F4~1, ...)")
    p.add_argument('--orient', help='orientação do Dynkin quiver, ex. "1>3 3>4 2>4"')
    p.add_argument('--class-word', help='palavra reduzida de w0 separada por espaços')
    p.add_argument('--sigma-coxeter', help='representantes das σ-órbitas da palavra de Coxeter torcida')
    p.add_argument('--sigma-order', type=int, default=None, help='ordem de σ (2 ou 3)')
    p.add_argument('--anchor', help='menor coordenada p, ex. 1/2')


def build_quiver(args) -> ARQuiver:
    """Quiver AR a partir de --orient, --class-word ou --sigma-coxeter"""
    if _is_affine(args.type):
        word = parse_word(args.class_word) if args.class_word else None
        quiver = default_assignment(args.type, orientation=args.orient, word=word).quiver
        return quiver.shifted(Fraction(args.anchor)) if args.anchor else quiver
    datum = finite_cartan(args.type)
    rs = build_root_system(datum)
    order = args.sigma_order or (2 if args.sigma_coxeter else 1)
    sigma = standard_automorphism(datum.tag, order) if order > 1 else None
    if args.class_word:
        c = commutation_class(rs, parse_word(args.class_word))
    elif args.sigma_coxeter:
        reps = sigma_coxeter_word(sigma, parse_word(args.sigma_coxeter))
        c = commutation_class(rs, twisted_longest_word(reps, sigma), check=False)
    elif args.orient:
        c = class_of_orientation(rs, QuiverOrientation.parse(args.orient))
    else:
        raise UsageError("Informe --orient, --class-word ou --sigma-coxeter")
    anchor = Fraction(args.anchor) if args.anchor else None
    return build_ar_quiver(c, sigma=sigma, anchor=anchor)


def cmd_quiver(args, out) -> int:
    quiver = build_quiver(args)
    out.write(render(quiver, args.format, folded=args.folded))
    return 0


def cmd_stats(args, out) -> int:
    quiver = build_quiver(args)
    if args.pair:
        k, l = args.pair
        out.write(f"D_{{{k},{l}}}(z) = {distance_polynomial(quiver, k, l)}\n")
        return 0
    out.write(StatisticsTable(quiver).to_csv())
    return 0


def cmd_module(args, out) -> int:
    module = fundamental_module(args.type, args.i)
    if args.format == 'json':
        out.write(module_dump(module))
    else:
        out.write(f"V(ϖ_{args.i}) de {module.aff.tag}: dim {module.dim} ({module.construction})\n")
        for mu, mult in sorted(classical_decomposition(module).items()):
            out.write(f"  {format_weight(mu)}: {mult}\n")
    if args.check:
        report = relation_report(module)
        out.write(f"relações: {report.checked} verificadas, {len(report.failures)} falhas\n")
        for failure in report.failures:
            out.write(f"  {failure}\n")
        return 0 if report.ok else 1
    return 0


def cmd_rmatrix(args, out) -> int:
    settings = get_settings()
    tag = normalize_affine_tag(args.type)
    j = args.j or args.i
    s = args.s or settings.qs_sample
    if args.pair:
        first, second = rnorm_entry_on_pair(tag, args.i, args.pair, s=s)
        out.write(f"u_z ⊗ f_{args.pair} u: {first.as_expr()}\n")
        out.write(f"f_{args.pair} u_z ⊗ u: {second.as_expr()}\n")
        return 0
    key = f"eigensystem:{tag}:{args.i}:{j}:{s}:{settings.coproduct}"
    payload = database.cache_get(key) if args.cache else None
    if payload is None:
        payload = eigensystem_dump(r_eigensystem(tag, args.i, j, s))
        if args.cache:
            database.cache_put(key, 'eigensystem', payload)
    out.write(payload)
    return 0


def cmd_denom(args, out) -> int:
    j = args.j or args.i
    if args.action == 'lookup':
        out.write(f"{denom_lookup(args.type, args.i, j, use_store=args.store)}\n")
        return 0
    computed = compute_denominator(args.type, args.i, j, confirm=not args.no_confirm)
    out.write(f"{computed}\n")
    if args.action == 'verify':
        stored = denom_lookup(args.type, args.i, j)
        if computed != stored:
            out.write(f"divergência: tabela {stored}\n")
            return 1
        out.write("ok\n")
    return 0


def cmd_dorey(args, out) -> int:
    tag = normalize_affine_tag(args.type)
    first, second = parse_param(tag, args.first), parse_param(tag, args.second)
    if first[1] is None or second[1] is None:
        raise UsageError("--first e --second exigem parâmetro espectral (i:escalar)")
    answer = dorey_query(tag, first, second, parse_param(tag, args.target), direction=args.direction)
    out.write(('verdadeiro' if answer.holds else 'falso') + '\n')
    if answer.witness:
        out.write(answer.witness.describe() + '\n')
    return 0


def cmd_gammaj(args, out) -> int:
    word = parse_word(args.class_word) if args.class_word else None
    assignment = default_assignment(args.type, orientation=args.orient, word=word)
    out.write(gamma_j(args.type, assignment).to_text() + '\n')
    return 0


def cmd_verify(args, out) -> int:
    tags = [normalize_affine_tag(t) for t in (args.type or AFFINE_TAGS)]
    suites = args.suite or ['all']
    failed = False
    for tag in tags:
        if args.celery:
            from denomkit.tasks import dispatch_suite

            names = [s for name in suites for s in (applicable_suites(tag) if name == 'all' else [name])]
            for name in names:
                result = dispatch_suite(tag, name)
                for row in result['rows']:
                    status = 'ok' if row['passed'] else 'FALHA'
                    out.write(f"{name}\t{tag}\t({row['cell'][0]},{row['cell'][1]})\t{status}\n")
                failed = failed or result['failed'] != 0
            continue
        report = verify_tables(tag, suites, threads=get_settings().threads, record=not args.no_record)
        out.write(report.to_text() + '\n')
        failed = failed or not report.passed
    return 1 if failed else 0


def cmd_db(args, out) -> int:
    if args.action == 'init':
        database.init_db()
        count = database.seed_denominators()
        if count is False:
            return 1
        out.write(f"{count} denominadores gravados em {database.get_db_path()}\n")
        return 0
    if args.action == 'backup':
        path = database.create_backup()
        if not path:
            out.write("backup não criado\n")
            return 1
        if get_settings().sqlite_secure and not database.verify_backup(path):
            out.write(f"{path}: hash não confere\n")
            return 1
        out.write(f"{path}\n")
        return 0
    if args.action == 'integrity':
        ok = database.check_database_integrity()
        out.write('ok\n' if ok else 'falha\n')
        return 0 if ok else 1
    out.write(json.dumps(database.get_database_stats(), sort_keys=True) + '\n')
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='denomkit', description='Denominadores de matrizes R normalizadas em tipos afins excepcionais')
    parser.add_argument('--coproduct', choices=['A', 'B'])
    parser.add_argument('--budget', type=int, help='orçamento da busca de palavras de descida')
    parser.add_argument('--threads', type=int)
    parser.add_argument('--log-level')
    sub = parser.add_subparsers(dest='verb', parser_class=_Parser)

    p = sub.add_parser('quiver', help='constrói e desenha um quiver AR')
    _class_options(p)
    p.add_argument('--format', choices=['ascii', 'dot', 'json'], default='ascii')
    p.add_argument('--folded', action='store_true')
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser('stats', help='estatísticas (k, l, t, |Φ|, o_t, θ_t) ou D_{k,l}(z)')
    _class_options(p)
    p.add_argument('--format', choices=['csv'], default='csv')
    p.add_argument('--pair', type=int, nargs=2, metavar=('K', 'L'))
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser('module', help='módulo fundamental V(ϖ_i)')
    p.add_argument('--type', required=True)
    p.add_argument('--i', type=int, required=True)
    p.add_argument('--format', choices=['text', 'json'], default='text')
    p.add_argument('--check', action='store_true', help='roda as relações do grupo quântico')
    p.set_defaults(func=cmd_module)

    p = sub.add_parser('rmatrix', help='autossistema de R^norm em V(ϖ_i) ⊗ V(ϖ_j)')
    p.add_argument('--type', required=True)
    p.add_argument('--i', type=int, required=True)
    p.add_argument('--j', type=int)
    p.add_argument('--s', type=int, help='valor de q_s')
    p.add_argument('--cache', action='store_true', help='usa a tabela computations do sqlite')
    p.add_argument('--pair', type=int, metavar='J', help='coeficientes de R^norm(u ⊗ f_J u) com i = j')
    p.set_defaults(func=cmd_rmatrix)

    p = sub.add_parser('denom', help='denominadores d_{i,j}(z)')
    p.add_argument('action', choices=['lookup', 'compute', 'verify'])
    p.add_argument('--type', required=True)
    p.add_argument('--i', type=int, required=True)
    p.add_argument('--j', type=int)
    p.add_argument('--store', action='store_true', help='consulta o sqlite antes do JSON')
    p.add_argument('--no-confirm', action='store_true', help='pula a conferência no segundo q_s')
    p.set_defaults(func=cmd_denom)

    p = sub.add_parser('dorey', help='regra de Dorey: first ⊗ second ↠ target')
    p.add_argument('--type', required=True)
    p.add_argument('--first', required=True, help='i:escalar, ex. "2:(-qs)^4"')
    p.add_argument('--second', required=True)
    p.add_argument('--target', required=True, help='k:escalar ou só k')
    p.add_argument('--direction', choices=['surjection', 'injection', 'any'], default='any')
    p.set_defaults(func=cmd_dorey)

    p = sub.add_parser('gammaj', help='quiver Γ^J dos módulos V(α_i)')
    p.add_argument('--type', required=True)
    p.add_argument('--orient')
    p.add_argument('--class-word')
    p.set_defaults(func=cmd_gammaj)

    p = sub.add_parser('verify', help='suítes de verificação das tabelas')
    p.add_argument('--type', action='append')
    p.add_argument('--suite', action='append', choices=['all'] + list(SUITES))
    p.add_argument('--no-record', action='store_true')
    p.add_argument('--celery', action='store_true', help='despacha as suítes como tarefas Celery')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('db', help='armazenamento sqlite')
    p.add_argument('action', choices=['init', 'backup', 'integrity', 'stats'])
    p.set_defaults(func=cmd_db)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        override_settings(coproduct=args.coproduct, search_budget=args.budget, threads=args.threads,
                          log_level=args.log_level)
        configure_logging()
        if not getattr(args, 'func', None):
            raise UsageError("Informe um comando; use --help")
        return args.func(args, out)
    except ValueError as e:
        sys.stderr.write(f"Erro: {e}\n")
        return 2

