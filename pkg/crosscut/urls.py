"""
URL configuration for the crosscut project.
"""
from django.urls import path, include

urlpatterns = [
    path('api/', include('solver.urls')),
]
