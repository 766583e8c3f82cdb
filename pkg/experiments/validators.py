import re

from django.core.exceptions import ValidationError

NUMBER = r"[-+]?\d+(\.\d+)?([eE][-+]?\d+)?"


def validate_sweep(value):
    pattern = rf"^{NUMBER}(:{NUMBER}:{NUMBER})?$"
    if not re.match(pattern, value.strip()):
        raise ValidationError(f"{value} is not a value or a start:stop:step sweep")


def validate_size_list(value):
    pattern = r"^\d+(x\d+)?(,\d+(x\d+)?)*$"
    if not re.match(pattern, value.replace(" ", "")):
        raise ValidationError(f"{value} is not a comma-separated list of N or N1xN2 sizes")


def validate_mode_list(value):
    pattern = r"^(ieee754|common|box)(,(ieee754|common|box))*$"
    if not re.match(pattern, value.replace(" ", "")):
        raise ValidationError(f"{value} is not a comma-separated list of encodings")
