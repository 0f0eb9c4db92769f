import h5py
import numpy as np

from lasq.errors import InvalidInputError, MissingFileError


class ResultQuery():
    '''
        Read back a result archive written by lv-scan, diffuse-sim or sweep
    '''

    def __init__(self, filepath):
        '''
            Setup the query object to retrieve archived results
        '''

        try:
            self.file = h5py.File(filepath, 'r')
        except OSError as error:
            raise MissingFileError('Could not open the archive (%s): %s' % (filepath, error))


    def close(self):
        self.file.close()


    def __enter__(self):
        return self


    def __exit__(self, *args):
        self.close()


    def get_field_names(self):
        '''
            Query the stored result fields of the file
        '''

        # grab the data keys
        return [_ for _ in self.file.keys() if _ != 'indexing']


    def get_parameter_names(self):
        '''
            Query the sweep axes of the file, in storage order
        '''

        return [_.decode('ascii') for _ in self.file['indexing']['order'][()]]


    def get_parameter_values(self, parameter):
        '''
            Query the values of one sweep axis
        '''

        # check the selected parameter is valid
        parameters = self.get_parameter_names()
        if parameter not in parameters:
            raise InvalidInputError('Parameter (%s) not in valid list. Use get_parameter_names() to find suitable options' % parameter)

        return np.array(self.file['indexing'][parameter])


    def query(self, field, conditions=None):
        '''
            Return a field, optionally at the entries closest to the given
            sweep conditions along the leading axis
        '''

        if field not in self.get_field_names():
            raise InvalidInputError('Field (%s) not in valid list. Use get_field_names() to find suitable options' % field)

        values = np.array(self.file[field])
        if not conditions:
            return values

        # find the closest index on the leading sweep axis
        parameter = self.get_parameter_names()[0]
        if parameter not in conditions:
            raise InvalidInputError('Conditions must name the leading parameter (%s)' % parameter)

        axis = self.get_parameter_values(parameter)
        index = int(np.argmin(np.abs(axis - conditions[parameter])))

        return values[index]
