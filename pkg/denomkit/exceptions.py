"""
Exceções do denomkit. Todas derivam de ValueError: são erros de entrada
ou de dados, nunca de infraestrutura.
"""


class DenomkitError(ValueError):
    pass


class PeriodMismatchError(DenomkitError):
    pass


class NonUnitSubstitutionError(DenomkitError):
    pass


class InfiniteResidueError(DenomkitError):
    pass


class IdentificationError(DenomkitError):
    pass


class UnsupportedTypeError(DenomkitError):
    pass


class NotReducedError(DenomkitError):
    pass


class DuplicateOrbitError(DenomkitError):
    pass


class CoordinateCollisionError(DenomkitError):
    pass


class UnsupportedShapeError(DenomkitError):
    pass


class SocleError(DenomkitError):
    pass


class EmptyPhiSetError(DenomkitError):
    pass


class ModuleConstructionError(DenomkitError):
    pass


class ExtremalMultiplicityError(DenomkitError):
    pass


class BudgetExhaustedError(DenomkitError):
    pass


class SingularSystemError(DenomkitError):
    pass


class InconsistentConstraintError(DenomkitError):
    pass


class VerificationError(DenomkitError):
    """Falha de verificação contra as tabelas (código de saída 1 na CLI)"""
