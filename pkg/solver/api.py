# solver/api.py
import logging

from django.core.exceptions import ValidationError
from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.throttling import AnonRateThrottle
from rest_framework.views import APIView

from graphs.embedding import is_one_planar, validate
from graphs.multigraph import format_rational
from graphs.serializers import load_drawing
from reductions.exceptions import GadgetError
from .cli import error_text
from .exceptions import LiftError, OracleBoundError, VerificationError
from .oracle import brute_cmc_cut, brute_mc
from .pipeline import solve_drawing
from .serializers import OracleOptionsSerializer, SolveOptionsSerializer, dump_solution

logger = logging.getLogger(__name__)


class DrawingAPIView(APIView):
    """ Base view: the request body is a drawing document. """
    permission_classes = [AllowAny]
    throttle_classes = [AnonRateThrottle]

    def load(self, request, check=True):
        return load_drawing(request.data, check=check)

    def invalid(self, exc):
        return Response({'error': error_text(exc)}, status=status.HTTP_400_BAD_REQUEST)


class SolveAPIView(DrawingAPIView):
    def post(self, request):
        options = SolveOptionsSerializer(data=request.query_params)
        if not options.is_valid():
            return Response({'error': options.errors}, status=status.HTTP_400_BAD_REQUEST)
        try:
            drawing = self.load(request)
            solution = solve_drawing(drawing, jobs=options.validated_data.get('jobs'))
        except ValidationError as exc:
            return self.invalid(exc)
        except (VerificationError, LiftError, GadgetError) as exc:
            logger.error(f"Solve failed internally: {exc}")
            return Response({'error': str(exc)}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)
        return Response(dump_solution(solution, omit_timing=options.validated_data['omit_timing']), status=status.HTTP_200_OK)


class ValidateAPIView(DrawingAPIView):
    def post(self, request):
        try:
            drawing = self.load(request, check=False)
        except ValidationError as exc:
            return self.invalid(exc)
        problem = validate(drawing)
        if problem:
            return Response({'valid': False, 'error': problem}, status=status.HTTP_400_BAD_REQUEST)
        return Response({'valid': True, 'k': drawing.k, 'one_planar': is_one_planar(drawing)}, status=status.HTTP_200_OK)


class OracleAPIView(DrawingAPIView):
    def post(self, request):
        options = OracleOptionsSerializer(data=request.data)
        if not options.is_valid():
            return Response({'error': options.errors}, status=status.HTTP_400_BAD_REQUEST)
        try:
            drawing = self.load(request)
        except ValidationError as exc:
            return self.invalid(exc)
        constraints = [tuple(pair) for pair in options.validated_data.get('constraints', [])]
        unknown = sorted({v for pair in constraints for v in pair} - drawing.graph.vertices)
        if unknown:
            return Response({'error': f"Constraint names unknown vertex {unknown[0]}."}, status=status.HTTP_400_BAD_REQUEST)
        try:
            payload = {'brute_mc': format_rational(brute_mc(drawing.graph))}
            if 'constraints' in options.validated_data:
                found = brute_cmc_cut(drawing.graph, constraints)
                payload['brute_cmc'] = None if found is None else format_rational(found[0])
        except OracleBoundError as exc:
            return Response({'error': str(exc)}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
        return Response(payload, status=status.HTTP_200_OK)
