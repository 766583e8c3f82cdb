from django.apps import AppConfig


class TransceiverAppConfig(AppConfig):
    name = "transceiver"
