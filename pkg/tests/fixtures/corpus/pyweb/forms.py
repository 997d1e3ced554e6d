class ValidationError(Exception):
    pass


class Field:
    def __init__(self, required=True, max_length=None):
        self.required = required
        self.max_length = max_length

    def clean(self, value):
        if value in (None, ""):
            if self.required:
                raise ValidationError("this field is required")
            return None
        value = str(value).strip()
        if self.max_length is not None and len(value) > self.max_length:
            raise ValidationError(f"at most {self.max_length} characters")
        return value


class IntegerField(Field):
    def clean(self, value):
        value = super().clean(value)
        if value is None:
            return None
        try:
            return int(value)
        except ValueError:
            raise ValidationError("enter a whole number")


def validate(fields, data):
    cleaned, errors = {}, {}
    for name, field in fields.items():
        try:
            cleaned[name] = field.clean(data.get(name))
        except ValidationError as exc:
            errors[name] = str(exc)
    return cleaned, errors
