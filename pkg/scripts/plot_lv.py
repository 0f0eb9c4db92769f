import sys

from lasq.characterise.query import ResultQuery
from lasq.plot.plot import plot_kappa_histogram, plot_lv_scatter


archive = sys.argv[1] if len(sys.argv) > 1 else 'results/lv/lv_scan.hdf5'

with ResultQuery(archive) as query_obj:

    print('fields: ', query_obj.get_field_names())
    print('quantiles: ', query_obj.get_parameter_values('q'))

    x = query_obj.query('x')
    y = query_obj.query('y')
    kappas = query_obj.query('kappa')

    print('median kappa: ', query_obj.query('kappa', {'q': 0.5}))

plot_lv_scatter(x, y, 'lv_scatter.png', kappas=kappas)
plot_kappa_histogram(kappas, 'kappa_quantiles.png', number_bins=16)
