from enum import Enum


class Hard(Enum):
    # infinite formula weight; kept apart from floats
    HARD = 'hard'

    def __str__(self):
        return self.value

HARD = Hard.HARD


class StatusEnum(Enum):
    relaxed = 'RELAXED'
    recovered = 'RECOVERED'

    def __str__(self):
        return self.value


class ScheduleEnum(Enum):
    sequential = 'seq'
    simultaneous = 'sim'

    def __str__(self):
        return self.value


class ModeEnum(Enum):
    ground = 'ground'
    lifted = 'lifted'

    def __str__(self):
        return self.value


class HeuristicEnum(Enum):
    residual = 'residual'

    def __str__(self):
        return self.value


class BudgetEnum(Enum):
    fraction = 'fraction'  # of ground equivalences, weighted by clone count
    count = 'count'  # of first-order (cell) equivalences
    cost = 'cost'  # max elimination width

    def __str__(self):
        return self.value


class EngineEnum(Enum):
    ve = 've'
    brute = 'brute'
    bp = 'bp'  # loopy BP oracle, approximate

    def __str__(self):
        return self.value


class GeneratorEnum(Enum):
    smokers = 'smokers'
    smokers_drinkers = 'smokers_drinkers'
    symmetric_smokers = 'symmetric_smokers'

    def __str__(self):
        return self.value


def get_enum(enum_cls, value):
    """Looks up an enum member by value or name, case-insensitively."""
    if isinstance(value, enum_cls):
        return value
    for member in enum_cls:
        if str(value).lower() in (member.value.lower(), member.name.lower()):
            return member
    raise ValueError(f'{value} is not a valid {enum_cls.__name__}')
