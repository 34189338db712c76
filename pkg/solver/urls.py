# solver/urls.py
from django.urls import path
from .api import OracleAPIView, SolveAPIView, ValidateAPIView

urlpatterns = [
    path('solve/', SolveAPIView.as_view(), name='solve'),
    path('validate/', ValidateAPIView.as_view(), name='validate'),
    path('oracle/', OracleAPIView.as_view(), name='oracle'),
]
